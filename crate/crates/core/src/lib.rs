//! Validated enclosure of simple zeros of polynomials.
//!
//! The crate pairs an exact interval arithmetic ([`interval`]) and polynomial
//! interval extensions ([`poly`]) with three interval iterations
//! ([`enclosure`]): the Moore–Newton method, which keeps the zero enclosed,
//! and two King-like variants, which do not. Scalar reference iterations live
//! in [`point`]; experiments (counterexample replay, randomized failure
//! study, convergence-order estimation, figure data) live in [`lab`].

pub mod enclosure;
pub mod error;
pub mod interval;
pub mod lab;
pub mod par;
pub mod point;
pub mod poly;

pub use enclosure::{
    run_enclosure, EnclosureTrace, Method, Outcome, RunConfig, Stage, StepContext, StepRecord,
};
pub use error::{Error, Result};
pub use interval::{parse_scalar, Interval, NumericMode, Rounding, Scalar};
pub use point::{iterate_scalar, ScalarTrace, StepRule};
pub use poly::{BracketedFunction, Polynomial};
