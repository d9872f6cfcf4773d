//! Scalar two-point iterations: Newton, King's family (Ostrowski at
//! `beta = 0`), and the same two-point scheme with the corrective factor
//! replaced by one.

use std::cmp::Ordering;

use rug::Rational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::{NumericMode, Rounding, Scalar};
use crate::poly::BracketedFunction;

/// Rule producing `x_{k+1}` from `x_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepRule {
    Newton,
    King {
        beta: Scalar,
    },
    /// King's two-point scheme with corrective factor 1.
    Uncorrected,
}

impl StepRule {
    pub fn ostrowski() -> Self {
        StepRule::King {
            beta: Rational::new(),
        }
    }

    pub fn step(&self, f: &BracketedFunction, x: &Scalar, mode: NumericMode) -> Result<Scalar> {
        let next = match self {
            StepRule::Newton => newton_step(f, x)?,
            StepRule::King { beta } => king_step(f, x, beta)?,
            StepRule::Uncorrected => uncorrected_step(f, x)?,
        };
        Ok(mode.round(next, Rounding::Nearest))
    }
}

pub fn newton_step(f: &BracketedFunction, x: &Scalar) -> Result<Scalar> {
    let d = f.eval_derivative(x);
    if d.cmp0() == Ordering::Equal {
        return Err(Error::DerivativeZero);
    }
    Ok(x - f.eval(x) / d)
}

/// One step of King's method:
///
/// ```text
/// y      = x - f(x)/f'(x)
/// x_next = y - (f(x) + beta f(y)) / (f(x) + (beta - 2) f(y)) * f(y)/f'(x)
/// ```
pub fn king_step(f: &BracketedFunction, x: &Scalar, beta: &Scalar) -> Result<Scalar> {
    let fx = f.eval(x);
    let d = f.eval_derivative(x);
    if d.cmp0() == Ordering::Equal {
        return Err(Error::DerivativeZero);
    }
    let y = x - Rational::from(&fx / &d);
    let fy = f.eval(&y);
    if fy.cmp0() == Ordering::Equal {
        return Ok(y);
    }
    let num = &fx + Rational::from(beta * &fy);
    let den = &fx + Rational::from(beta - 2u32) * &fy;
    if den.cmp0() == Ordering::Equal {
        return Err(Error::CorrectionDenominatorZero);
    }
    Ok(y - num / den * fy / d)
}

/// King's two-point scheme with the corrective factor set to one:
/// `y - f(y)/f'(x)`.
pub fn uncorrected_step(f: &BracketedFunction, x: &Scalar) -> Result<Scalar> {
    let d = f.eval_derivative(x);
    if d.cmp0() == Ordering::Equal {
        return Err(Error::DerivativeZero);
    }
    let y = x - f.eval(x) / &d;
    let fy = f.eval(&y);
    Ok(y - fy / d)
}

/// Iterates and residuals of one scalar run.
#[derive(Clone, Debug, Serialize)]
pub struct ScalarTrace {
    #[serde(serialize_with = "ser_scalars")]
    pub iterates: Vec<Scalar>,
    #[serde(serialize_with = "ser_scalars")]
    pub residuals: Vec<Scalar>,
    pub converged: bool,
}

fn ser_scalars<S: serde::Serializer>(v: &[Scalar], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&crate::interval::format_scalar(
            x,
            crate::interval::DISPLAY_DIGITS,
            Rounding::Nearest,
        ))?;
    }
    seq.end()
}

impl ScalarTrace {
    /// `|x_k - zero|` for every iterate.
    pub fn errors(&self, zero: &Scalar) -> Vec<Scalar> {
        self.iterates
            .iter()
            .map(|x| Rational::from(x - zero).abs())
            .collect()
    }

    pub fn last(&self) -> &Scalar {
        self.iterates
            .last()
            .expect("trace holds the starting point")
    }
}

/// Applies `rule` from `x0` until `|f(x_k)| <= tol` or `max_iter` steps.
pub fn iterate_scalar(
    rule: &StepRule,
    f: &BracketedFunction,
    x0: Scalar,
    tol: &Scalar,
    max_iter: usize,
    mode: NumericMode,
) -> Result<ScalarTrace> {
    let mut iterates = vec![x0];
    let mut residuals = vec![f.eval(&iterates[0])];
    for k in 0..max_iter {
        if Rational::from(residuals[k].abs_ref()) <= *tol {
            break;
        }
        let next = rule
            .step(f, &iterates[k], mode)
            .map_err(|e| Error::AtIteration {
                k,
                source: Box::new(e),
            })?;
        residuals.push(f.eval(&next));
        iterates.push(next);
    }
    let converged = Rational::from(residuals.last().unwrap().abs_ref()) <= *tol;
    Ok(ScalarTrace {
        iterates,
        residuals,
        converged,
    })
}
