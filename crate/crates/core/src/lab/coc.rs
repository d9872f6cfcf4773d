//! Computational order of convergence.
//!
//! For three consecutive magnitudes `r_{k-1} > r_k > r_{k+1} > 0`
//!
//! ```text
//! r_c = log(r_{k+1} / r_k) / log(r_k / r_{k-1})
//! ```
//!
//! The magnitudes are interval semi-widths for enclosure traces and
//! `|x_k - x*|` for scalar traces. Logarithms are taken in MPFR at
//! [`LOG_BITS`] bits, so radii far below the `f64` range are fine.

use std::cmp::Ordering;

use serde::Serialize;

use crate::enclosure::EnclosureTrace;
use crate::error::{Error, Result};
use crate::interval::{format_scalar, ln, Rounding, Scalar, DISPLAY_DIGITS};
use crate::point::ScalarTrace;

pub const LOG_BITS: u32 = 256;

/// A sequence of shrinking magnitudes.
pub trait ConvergenceSequence {
    fn magnitudes(&self) -> Vec<Scalar>;
}

impl ConvergenceSequence for EnclosureTrace {
    fn magnitudes(&self) -> Vec<Scalar> {
        self.radii()
    }
}

/// A scalar trace paired with the zero it approaches.
pub struct ScalarErrors<'a> {
    pub trace: &'a ScalarTrace,
    pub zero: &'a Scalar,
}

impl ConvergenceSequence for ScalarErrors<'_> {
    fn magnitudes(&self) -> Vec<Scalar> {
        self.trace.errors(self.zero)
    }
}

impl ConvergenceSequence for [Scalar] {
    fn magnitudes(&self) -> Vec<Scalar> {
        self.to_vec()
    }
}

impl ConvergenceSequence for Vec<Scalar> {
    fn magnitudes(&self) -> Vec<Scalar> {
        self.clone()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CocMeasurement {
    /// Index of `r_{k-1}` in the sequence.
    pub index: usize,
    /// `r_{k-1}, r_k, r_{k+1}`.
    #[serde(serialize_with = "ser_triple")]
    pub magnitudes: [Scalar; 3],
    pub r_c: f64,
    /// `r_{k-1}` is below the smallness threshold.
    pub valid: bool,
}

fn ser_triple<S: serde::Serializer>(v: &[Scalar; 3], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(3))?;
    for x in v {
        seq.serialize_element(&format_scalar(x, DISPLAY_DIGITS, Rounding::Nearest))?;
    }
    seq.end()
}

/// Order estimate from the last three consecutive strictly decreasing,
/// strictly positive entries of `seq`.
pub fn computational_order<S: ConvergenceSequence + ?Sized>(
    seq: &S,
    smallness: &Scalar,
) -> Result<CocMeasurement> {
    let r = seq.magnitudes();
    let window = (0..r.len().saturating_sub(2))
        .rev()
        .find(|&i| r[i + 2].cmp0() == Ordering::Greater && r[i] > r[i + 1] && r[i + 1] > r[i + 2]);
    let Some(i) = window else {
        return Err(if r.iter().any(|x| x.cmp0() == Ordering::Equal) {
            Error::ZeroRadius
        } else {
            Error::InsufficientTrace
        });
    };
    let [a, b, c] = [&r[i], &r[i + 1], &r[i + 2]].map(|x| ln(x, LOG_BITS));
    let r_c = (c - &b) / (b - a);
    Ok(CocMeasurement {
        index: i,
        magnitudes: [r[i].clone(), r[i + 1].clone(), r[i + 2].clone()],
        r_c: r_c.to_f64(),
        valid: r[i] < *smallness,
    })
}

/// Drops everything from the first entry at or below `floor` onwards.
/// Float runs stall near the working precision; those entries carry
/// rounding noise rather than convergence.
pub fn above_floor(mut seq: Vec<Scalar>, floor: &Scalar) -> Vec<Scalar> {
    if let Some(cut) = seq.iter().position(|x| x <= floor) {
        seq.truncate(cut);
    }
    seq
}
