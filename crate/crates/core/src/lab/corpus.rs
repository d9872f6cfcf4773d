//! Fixed corpus of bracketed polynomials with known rational zeros.
//!
//! Chosen for this crate: no published list exists. Brackets are narrow
//! enough that the King-like iteration keeps its zero, and asymmetric so no
//! midpoint hits the zero exactly.

use serde::Serialize;

use crate::interval::{parse_scalar, Interval, Scalar};
use crate::poly::{BracketedFunction, Polynomial};

/// Ascending coefficients, zero, bracket.
const TABLE: [(&[&str], &str, [&str; 2]); 20] = [
    (&["-12", "0", "1", "1"], "2", ["1.83", "2.21"]),
    (&["-8", "0", "0", "1"], "2", ["1.85", "2.3"]),
    (&["-4", "0", "1"], "2", ["1.7", "2.45"]),
    (&["-6", "-1", "0", "1"], "2", ["1.83", "2.21"]),
    (&["-16", "0", "0", "0", "1"], "2", ["1.83", "2.21"]),
    (&["-6", "-7", "0", "1"], "3", ["2.75", "3.3"]),
    (&["-18", "1", "0", "0", "1"], "2", ["1.83", "2.21"]),
    (&["-32", "0", "0", "0", "0", "1"], "2", ["1.93", "2.1"]),
    (&["27", "0", "0", "-1"], "3", ["2.8", "3.15"]),
    (&["-1", "0", "0", "1"], "1", ["0.85", "1.2"]),
    (&["-1/2", "1", "-1/2", "1"], "1/2", ["0.35", "0.62"]),
    (&["-10", "-3", "0", "2"], "2", ["1.8", "2.25"]),
    (&["-24", "0", "4", "1"], "2", ["1.8", "2.25"]),
    (&["-28", "3", "-3", "1"], "4", ["3.8", "4.3"]),
    (&["1", "0", "-1"], "1", ["0.85", "1.2"]),
    (&["3/2", "1", "3/2", "1"], "-3/2", ["-1.7", "-1.35"]),
    (&["-34", "1", "0", "0", "0", "1"], "2", ["1.9", "2.12"]),
    (
        &[
            "-1/7", "-1/42", "-1/30", "-1/20", "-1/12", "-1/6", "-1/2", "1",
        ],
        "1",
        ["0.85", "1.2"],
    ),
    (
        &["-64", "0", "0", "0", "0", "0", "1"],
        "2",
        ["1.93", "2.08"],
    ),
    (&["6", "-5", "-2", "1"], "3", ["2.8", "3.25"]),
];

#[derive(Clone, Debug, Serialize)]
pub struct CorpusEntry {
    pub label: String,
    #[serde(skip)]
    pub function: BracketedFunction,
    #[serde(serialize_with = "crate::lab::ser_scalar")]
    pub zero: Scalar,
    pub bracket: Interval,
}

/// The 20 entries, each verified monotone with a sign change on its
/// bracket.
pub fn coc_corpus() -> Vec<CorpusEntry> {
    TABLE
        .iter()
        .map(|(coeffs, zero, [lo, hi])| {
            let q = |s: &str| parse_scalar(s).expect("corpus literal");
            let poly = Polynomial::new(coeffs.iter().map(|c| q(c)).collect());
            let bracket = Interval::new(q(lo), q(hi)).expect("corpus bracket");
            let label = poly.to_string();
            let function =
                BracketedFunction::check(poly, bracket.clone()).expect("corpus entry is bracketed");
            CorpusEntry {
                label,
                function,
                zero: q(zero),
                bracket,
            }
        })
        .collect()
}
