//! Experiments built on the enclosure methods: counterexample replay,
//! the randomized failure-rate study, convergence-order measurement and
//! plot data for the two geometric pictures.

pub mod coc;
pub mod corpus;
pub mod examples;
pub mod figure;
pub mod orders;
pub mod study;

pub use coc::{computational_order, CocMeasurement, ConvergenceSequence, ScalarErrors};
pub use corpus::{coc_corpus, CorpusEntry};
pub use examples::{reproduce_example, Example, ExampleReport};
pub use figure::{figure_data, Figure, FigureData};
pub use orders::{coc_study, CocConfig, CocReport};
pub use study::{
    failure_rate_study, failure_rate_study_sequential, replay_witness, StudyConfig, StudyReport,
    Witness,
};

use crate::interval::{format_scalar, Rounding, Scalar, DISPLAY_DIGITS};

pub(crate) fn ser_scalar<S: serde::Serializer>(x: &Scalar, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_scalar(x, DISPLAY_DIGITS, Rounding::Nearest))
}

pub(crate) fn ser_scalars<S: serde::Serializer>(v: &[Scalar], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(
        v.iter()
            .map(|x| format_scalar(x, DISPLAY_DIGITS, Rounding::Nearest)),
    )
}

pub(crate) fn ser_opt_scalar<S: serde::Serializer>(
    x: &Option<Scalar>,
    s: S,
) -> Result<S::Ok, S::Error> {
    match x {
        Some(x) => ser_scalar(x, s),
        None => s.serialize_none(),
    }
}
