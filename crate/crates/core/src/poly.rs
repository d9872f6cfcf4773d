//! Dense polynomials, their interval extensions, and bracketed functions.

use std::cmp::Ordering;
use std::fmt;

use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::interval::{FInterval, Interval, NumericMode, Scalar};

/// Maximum bisection depth used by [`BracketedFunction::derivative_range`].
pub const DERIVATIVE_SPLIT_DEPTH: u32 = 6;

/// Polynomial with coefficients in ascending degree order.
///
/// Trailing zero coefficients are stripped on construction, so the zero
/// polynomial has an empty coefficient list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<Scalar>,
    /// Common denominator of the coefficients.
    denom: Integer,
    /// `coeffs[i] * denom`, all integers.
    scaled: Vec<Integer>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.cmp0() == Ordering::Equal) {
            coeffs.pop();
        }
        let denom = coeffs
            .iter()
            .fold(Integer::from(1), |acc, c| acc.lcm(c.denom()));
        let scaled = coeffs
            .iter()
            .map(|c| c.numer() * Integer::from(&denom / c.denom()))
            .collect();
        Polynomial {
            coeffs,
            denom,
            scaled,
        }
    }

    pub fn zero() -> Self {
        Polynomial::new(Vec::new())
    }

    /// Convenience constructor from small integer coefficients, ascending.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    /// Monic product of linear factors `(x - r)` over the given roots.
    pub fn from_roots(roots: &[Scalar]) -> Self {
        roots.iter().fold(Polynomial::from_ints(&[1]), |acc, r| {
            acc.mul(&Polynomial::new(vec![
                Rational::from(-r),
                Rational::from(1),
            ]))
        })
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Rational::new(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        Polynomial::new(out)
    }

    /// Exact Horner evaluation, carried out on integers with a single
    /// normalization at the end: for `x = n/m`,
    /// `p(x) = (sum_i C_i n^i m^(d-i)) / (D m^d)`.
    pub fn eval(&self, x: &Scalar) -> Scalar {
        let Some((acc, m_pow)) = self.eval_scaled(x) else {
            return Rational::new();
        };
        Rational::from((acc, m_pow * &self.denom))
    }

    /// `(N, m^d)` with `p(x) = N / (m^d D)` for `x = n/m`; `None` for the
    /// zero polynomial.
    fn eval_scaled(&self, x: &Scalar) -> Option<(Integer, Integer)> {
        let (lead, rest) = self.scaled.split_last()?;
        let (n, m) = (x.numer(), x.denom());
        let mut acc = lead.clone();
        let mut m_pow = Integer::from(1);
        for c in rest.iter().rev() {
            acc *= n;
            if *m == 1 {
                acc += c;
            } else {
                m_pow *= m;
                acc += Integer::from(c * &m_pow);
            }
        }
        Some((acc, m_pow))
    }

    /// Exact sign of `p(x)` without normalizing the value.
    pub fn sign_exact(&self, x: &Scalar) -> Ordering {
        self.eval_scaled(x)
            .map_or(Ordering::Equal, |(acc, _)| acc.cmp0())
    }

    /// Sign of `p(x)`, decided from the float enclosure when it excludes
    /// zero and from exact evaluation otherwise.
    pub fn sign_at(&self, x: &Scalar, mode: NumericMode) -> Ordering {
        if !mode.is_exact() {
            let e = self.eval_point(x, mode);
            if e.lo().cmp0() == Ordering::Greater {
                return Ordering::Greater;
            }
            if e.hi().cmp0() == Ordering::Less {
                return Ordering::Less;
            }
        }
        self.sign_exact(x)
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| Rational::from(c * i as u32))
                .collect(),
        )
    }

    /// Interval Horner scheme. The result encloses `{p(x) : x in X}`.
    pub fn eval_interval(&self, x: &Interval, mode: NumericMode) -> Interval {
        if let Some(bits) = mode.bits() {
            return self.horner_float(&FInterval::new(x, bits), bits);
        }
        if x.is_point() {
            return self.eval_point(x.lo(), mode);
        }
        let mut coeffs = self.coeffs.iter().rev();
        let Some(lead) = coeffs.next() else {
            return Interval::point(Rational::new());
        };
        let mut acc = Interval::point(lead.clone());
        for c in coeffs {
            acc = acc.mul(x, mode).add(&Interval::point(c.clone()), mode);
        }
        acc
    }

    /// Value at `x`: exact in exact mode, an outward-rounded enclosure in
    /// float mode.
    pub fn eval_point(&self, x: &Scalar, mode: NumericMode) -> Interval {
        match mode.bits() {
            None => Interval::point(self.eval(x)),
            Some(bits) => self.horner_float(&FInterval::point(x, bits), bits),
        }
    }

    fn horner_float(&self, x: &FInterval, bits: u32) -> Interval {
        let mut coeffs = self.coeffs.iter().rev();
        let Some(lead) = coeffs.next() else {
            return Interval::point(Rational::new());
        };
        let mut acc = FInterval::point(lead, bits);
        for c in coeffs {
            acc = acc.mul(x, bits).add(&FInterval::point(c, bits), bits);
        }
        acc.into_interval()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.cmp0() == Ordering::Equal {
                continue;
            }
            let negative = c.cmp0() == Ordering::Less;
            let abs = Rational::from(c.abs_ref());
            let sign = match (first, negative) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            f.write_str(sign)?;
            let one = abs == 1;
            match i {
                0 => write!(f, "{abs}")?,
                1 if one => f.write_str("x")?,
                1 => write!(f, "{abs}*x")?,
                _ if one => write!(f, "x^{i}")?,
                _ => write!(f, "{abs}*x^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// A polynomial on a domain where it has a verified sign change and a
/// derivative enclosure free of zero, hence exactly one simple zero.
#[derive(Clone, Debug)]
pub struct BracketedFunction {
    f: Polynomial,
    domain: Interval,
    derivative: Polynomial,
    second_derivative: Polynomial,
}

impl BracketedFunction {
    /// Verifies both bracket conditions on `domain` and caches the
    /// derivatives.
    pub fn check(f: Polynomial, domain: Interval) -> Result<Self> {
        let derivative = f.derivative();
        let second_derivative = derivative.derivative();
        let bf = BracketedFunction {
            f,
            domain,
            derivative,
            second_derivative,
        };
        if bf
            .derivative_range(&bf.domain, NumericMode::Exact)
            .contains_zero()
        {
            return Err(Error::NotMonotone);
        }
        let lo = bf.eval(bf.domain.lo());
        let hi = bf.eval(bf.domain.hi());
        if Rational::from(&lo * &hi).cmp0() != Ordering::Less {
            return Err(Error::NoSignChange);
        }
        Ok(bf)
    }

    pub fn poly(&self) -> &Polynomial {
        &self.f
    }

    pub fn domain(&self) -> &Interval {
        &self.domain
    }

    pub fn derivative(&self) -> &Polynomial {
        &self.derivative
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.f.eval(x)
    }

    pub fn eval_derivative(&self, x: &Scalar) -> Scalar {
        self.derivative.eval(x)
    }

    /// Sign of `f'` on the domain: `Greater` for increasing functions.
    pub fn direction(&self) -> Ordering {
        self.eval_derivative(self.domain.lo()).cmp0()
    }

    /// Enclosure `F'(X)` of the derivative over `x`.
    ///
    /// When `f''` has constant sign on `x`, `f'` is monotone there and the
    /// hull of the endpoint values is the exact range. Otherwise `x` is
    /// bisected (up to [`DERIVATIVE_SPLIT_DEPTH`] levels) and the pieces are
    /// joined; pieces that still fail the curvature test fall back to the
    /// interval Horner extension of `f'`.
    pub fn derivative_range(&self, x: &Interval, mode: NumericMode) -> Interval {
        self.derivative_range_split(x, mode, DERIVATIVE_SPLIT_DEPTH)
    }

    /// As [`Self::derivative_range`] with an explicit bisection depth; depth
    /// 0 is the plain two-tier rule.
    pub fn derivative_range_split(&self, x: &Interval, mode: NumericMode, depth: u32) -> Interval {
        let monotone = self.curvature_has_constant_sign(x, mode);
        if monotone {
            let a = self.derivative.eval_point(x.lo(), mode);
            let b = self.derivative.eval_point(x.hi(), mode);
            a.join(&b)
        } else if depth == 0 || x.is_point() {
            self.derivative.eval_interval(x, mode)
        } else {
            let m = x.midpoint();
            let left = Interval::hull(x.lo().clone(), m.clone());
            let right = Interval::hull(m, x.hi().clone());
            self.derivative_range_split(&left, mode, depth - 1)
                .join(&self.derivative_range_split(&right, mode, depth - 1))
        }
    }

    /// Whether the interval Horner enclosure of `f''` over `x` excludes
    /// either sign. In exact mode a 128-bit outward-rounded enclosure is
    /// tried first; it contains the exact one, so a constant sign there
    /// gives the same answer without the cost of exact interval arithmetic.
    fn curvature_has_constant_sign(&self, x: &Interval, mode: NumericMode) -> bool {
        let one_signed =
            |c: &Interval| c.lo().cmp0() != Ordering::Less || c.hi().cmp0() != Ordering::Greater;
        if mode.is_exact()
            && one_signed(
                &self
                    .second_derivative
                    .eval_interval(x, NumericMode::Float { digits: 38 }),
            )
        {
            return true;
        }
        one_signed(&self.second_derivative.eval_interval(x, mode))
    }

    /// True when `f` takes values of opposite sign (or zero) at the ends of
    /// `x`. For a monotone `f` this holds iff the zero lies in `x`.
    pub fn changes_sign_on(&self, x: &Interval) -> bool {
        self.changes_sign_on_with(x, NumericMode::Exact)
    }

    /// As [`Self::changes_sign_on`]; `mode` only selects how signs are
    /// decided (the answer is exact either way).
    pub fn changes_sign_on_with(&self, x: &Interval, mode: NumericMode) -> bool {
        let a = self.f.sign_at(x.lo(), mode);
        let b = self.f.sign_at(x.hi(), mode);
        a == Ordering::Equal || b == Ordering::Equal || a != b
    }
}
