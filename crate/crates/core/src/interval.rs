//! Closed intervals over arbitrary-precision rationals.
//!
//! Every operation is computed exactly first. In [`NumericMode::Float`] the
//! exact result is then rounded outward to the working precision, so a float
//! result always contains the exact-mode result for the same inputs.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rug::float::Round;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numeric value used throughout the crate.
///
/// In exact mode values are carried as reduced fractions. In float mode they
/// are still rationals, but every result has been rounded onto the binary
/// grid of the working precision (a dyadic rational).
pub type Scalar = Rational;

/// Run-level arithmetic configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
#[derive(Default)]
pub enum NumericMode {
    /// No rounding ever occurs.
    #[default]
    Exact,
    /// Directed rounding to `digits` significant decimal digits.
    Float { digits: u32 },
}

/// Rounding direction for a single scalar.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Down,
    Up,
    Nearest,
}

impl NumericMode {
    pub const DEFAULT_FLOAT_DIGITS: u32 = 1000;

    pub fn float(digits: u32) -> Self {
        NumericMode::Float { digits }
    }

    /// Binary precision large enough to hold `digits` decimal digits.
    pub fn bits(self) -> Option<u32> {
        match self {
            NumericMode::Exact => None,
            NumericMode::Float { digits } => {
                Some(((f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32).max(8) + 1)
            }
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, NumericMode::Exact)
    }

    /// Rounds `x` to the working precision in the given direction.
    pub fn round(self, x: Scalar, dir: Rounding) -> Scalar {
        let Some(bits) = self.bits() else { return x };
        if x.cmp0() == Ordering::Equal {
            return x;
        }
        let round = match dir {
            Rounding::Down => Round::Down,
            Rounding::Up => Round::Up,
            Rounding::Nearest => Round::Nearest,
        };
        let (f, _) = Float::with_val_round(bits, &x, round);
        f.to_rational().expect("finite rounding of a rational")
    }

    /// Rounds the bounds of `x` outward.
    pub fn outward(self, x: Interval) -> Interval {
        if self.is_exact() {
            return x;
        }
        let Interval { lo, hi } = x;
        Interval {
            lo: self.round(lo, Rounding::Down),
            hi: self.round(hi, Rounding::Up),
        }
    }
}

/// A closed interval `[lo, hi]` with `lo <= hi`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Scalar,
    hi: Scalar,
}

/// The four basic interval operations plus negation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
}

impl Interval {
    /// Builds `[lo, hi]`, rejecting reversed bounds.
    pub fn new(lo: Scalar, hi: Scalar) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidBounds {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(Interval { lo, hi })
    }

    /// The degenerate interval `[x, x]`.
    pub fn point(x: Scalar) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    /// `[min(a, b), max(a, b)]`.
    pub fn hull(a: Scalar, b: Scalar) -> Self {
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    /// Smallest interval containing both operands.
    pub fn join(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn lo(&self) -> &Scalar {
        &self.lo
    }

    pub fn hi(&self) -> &Scalar {
        &self.hi
    }

    pub fn into_bounds(self) -> (Scalar, Scalar) {
        (self.lo, self.hi)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Exact midpoint `(lo + hi) / 2`.
    pub fn midpoint(&self) -> Scalar {
        Rational::from(&self.lo + &self.hi) / 2u32
    }

    /// Exact semi-width `(hi - lo) / 2`.
    pub fn radius(&self) -> Scalar {
        Rational::from(&self.hi - &self.lo) / 2u32
    }

    pub fn width(&self) -> Scalar {
        Rational::from(&self.hi - &self.lo)
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.cmp0() != Ordering::Greater && self.hi.cmp0() != Ordering::Less
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Intersection; `None` is the empty set.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = if self.lo >= other.lo {
            &self.lo
        } else {
            &other.lo
        };
        let hi = if self.hi <= other.hi {
            &self.hi
        } else {
            &other.hi
        };
        if lo <= hi {
            Some(Interval {
                lo: lo.clone(),
                hi: hi.clone(),
            })
        } else {
            None
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: Rational::from(-&self.hi),
            hi: Rational::from(-&self.lo),
        }
    }

    pub fn add(&self, rhs: &Interval, mode: NumericMode) -> Interval {
        if let Some(bits) = mode.bits() {
            return FInterval::new(self, bits)
                .add(&FInterval::new(rhs, bits), bits)
                .into_interval();
        }
        mode.outward(Interval {
            lo: Rational::from(&self.lo + &rhs.lo),
            hi: Rational::from(&self.hi + &rhs.hi),
        })
    }

    pub fn sub(&self, rhs: &Interval, mode: NumericMode) -> Interval {
        if let Some(bits) = mode.bits() {
            return FInterval::new(self, bits)
                .sub(&FInterval::new(rhs, bits), bits)
                .into_interval();
        }
        mode.outward(Interval {
            lo: Rational::from(&self.lo - &rhs.hi),
            hi: Rational::from(&self.hi - &rhs.lo),
        })
    }

    pub fn mul(&self, rhs: &Interval, mode: NumericMode) -> Interval {
        if let Some(bits) = mode.bits() {
            return FInterval::new(self, bits)
                .mul(&FInterval::new(rhs, bits), bits)
                .into_interval();
        }
        if self.is_point() && rhs.is_point() {
            return mode.outward(Interval::point(Rational::from(&self.lo * &rhs.lo)));
        }
        let products = [
            Rational::from(&self.lo * &rhs.lo),
            Rational::from(&self.lo * &rhs.hi),
            Rational::from(&self.hi * &rhs.lo),
            Rational::from(&self.hi * &rhs.hi),
        ];
        mode.outward(min_max(products))
    }

    /// Multiplication by a scalar promoted to a point interval.
    pub fn scale(&self, k: &Scalar, mode: NumericMode) -> Interval {
        if !mode.is_exact() {
            return self.mul(&Interval::point(k.clone()), mode);
        }
        let a = Rational::from(&self.lo * k);
        let b = Rational::from(&self.hi * k);
        mode.outward(Interval::hull(a, b))
    }

    pub fn div(&self, rhs: &Interval, mode: NumericMode) -> Result<Interval> {
        if rhs.contains_zero() {
            return Err(Error::DivisionByZeroInterval);
        }
        if let Some(bits) = mode.bits() {
            return Ok(FInterval::new(self, bits)
                .div(&FInterval::new(rhs, bits), bits)
                .into_interval());
        }
        if rhs.is_point() {
            let a = Rational::from(&self.lo / &rhs.lo);
            let b = Rational::from(&self.hi / &rhs.lo);
            return Ok(mode.outward(Interval::hull(a, b)));
        }
        let quotients = [
            Rational::from(&self.lo / &rhs.lo),
            Rational::from(&self.lo / &rhs.hi),
            Rational::from(&self.hi / &rhs.lo),
            Rational::from(&self.hi / &rhs.hi),
        ];
        Ok(mode.outward(min_max(quotients)))
    }

    /// Dispatches one of the basic operations. `rhs` is ignored for `Neg`.
    pub fn arith(
        op: ArithOp,
        lhs: &Interval,
        rhs: &Interval,
        mode: NumericMode,
    ) -> Result<Interval> {
        Ok(match op {
            ArithOp::Add => lhs.add(rhs, mode),
            ArithOp::Sub => lhs.sub(rhs, mode),
            ArithOp::Mul => lhs.mul(rhs, mode),
            ArithOp::Div => lhs.div(rhs, mode)?,
            ArithOp::Neg => mode.outward(lhs.neg()),
        })
    }

    /// Decimal rendering with `digits` significant digits, lo rounded down
    /// and hi rounded up so the printed interval contains this one.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        format!(
            "[{}, {}]",
            format_scalar(&self.lo, digits, Rounding::Down),
            format_scalar(&self.hi, digits, Rounding::Up)
        )
    }
}

/// Directed conversion. Dyadic rationals (every float-mode result) skip
/// the general division MPFR would otherwise perform.
fn to_float(x: &Rational, bits: u32, round: Round) -> Float {
    let den = x.denom();
    if den.is_power_of_two() {
        let shift = den.significant_bits() - 1;
        let mut f = Float::with_val_round(bits, x.numer(), round).0;
        f >>= shift;
        f
    } else {
        Float::with_val_round(bits, x, round).0
    }
}

/// Interval with MPFR bounds, used for float-mode arithmetic.
///
/// Bounds are converted with the lower end rounded down and the upper end
/// rounded up, and every operation rounds its lower result down and upper
/// result up, so containment is preserved end to end.
#[derive(Clone, Debug)]
pub(crate) struct FInterval {
    lo: Float,
    hi: Float,
}

impl FInterval {
    pub(crate) fn new(x: &Interval, bits: u32) -> Self {
        FInterval {
            lo: to_float(&x.lo, bits, Round::Down),
            hi: to_float(&x.hi, bits, Round::Up),
        }
    }

    pub(crate) fn point(x: &Scalar, bits: u32) -> Self {
        FInterval {
            lo: to_float(x, bits, Round::Down),
            hi: to_float(x, bits, Round::Up),
        }
    }

    pub(crate) fn into_interval(self) -> Interval {
        Interval {
            lo: self.lo.to_rational().expect("finite bound"),
            hi: self.hi.to_rational().expect("finite bound"),
        }
    }

    pub(crate) fn add(&self, rhs: &FInterval, bits: u32) -> FInterval {
        FInterval {
            lo: Float::with_val_round(bits, &self.lo + &rhs.lo, Round::Down).0,
            hi: Float::with_val_round(bits, &self.hi + &rhs.hi, Round::Up).0,
        }
    }

    pub(crate) fn sub(&self, rhs: &FInterval, bits: u32) -> FInterval {
        FInterval {
            lo: Float::with_val_round(bits, &self.lo - &rhs.hi, Round::Down).0,
            hi: Float::with_val_round(bits, &self.hi - &rhs.lo, Round::Up).0,
        }
    }

    pub(crate) fn mul(&self, rhs: &FInterval, bits: u32) -> FInterval {
        let (a, b) = (self, rhs);
        let down = |x: &Float, y: &Float| Float::with_val_round(bits, x * y, Round::Down).0;
        let up = |x: &Float, y: &Float| Float::with_val_round(bits, x * y, Round::Up).0;
        let (lo, hi) = match (a.sign(), b.sign()) {
            (Sign::Pos, Sign::Pos) => (down(&a.lo, &b.lo), up(&a.hi, &b.hi)),
            (Sign::Pos, Sign::Neg) => (down(&a.hi, &b.lo), up(&a.lo, &b.hi)),
            (Sign::Pos, Sign::Mixed) => (down(&a.hi, &b.lo), up(&a.hi, &b.hi)),
            (Sign::Neg, Sign::Pos) => (down(&a.lo, &b.hi), up(&a.hi, &b.lo)),
            (Sign::Neg, Sign::Neg) => (down(&a.hi, &b.hi), up(&a.lo, &b.lo)),
            (Sign::Neg, Sign::Mixed) => (down(&a.lo, &b.hi), up(&a.lo, &b.lo)),
            (Sign::Mixed, Sign::Pos) => (down(&a.lo, &b.hi), up(&a.hi, &b.hi)),
            (Sign::Mixed, Sign::Neg) => (down(&a.hi, &b.lo), up(&a.lo, &b.lo)),
            (Sign::Mixed, Sign::Mixed) => (
                down(&a.lo, &b.hi).min(&down(&a.hi, &b.lo)),
                up(&a.lo, &b.lo).max(&up(&a.hi, &b.hi)),
            ),
        };
        FInterval { lo, hi }
    }

    /// Caller guarantees `0 ∉ rhs`.
    pub(crate) fn div(&self, rhs: &FInterval, bits: u32) -> FInterval {
        let (a, b) = (self, rhs);
        let down = |x: &Float, y: &Float| Float::with_val_round(bits, x / y, Round::Down).0;
        let up = |x: &Float, y: &Float| Float::with_val_round(bits, x / y, Round::Up).0;
        let (lo, hi) = match (a.sign(), b.sign()) {
            (Sign::Pos, Sign::Pos) => (down(&a.lo, &b.hi), up(&a.hi, &b.lo)),
            (Sign::Neg, Sign::Pos) => (down(&a.lo, &b.lo), up(&a.hi, &b.hi)),
            (Sign::Mixed, Sign::Pos) => (down(&a.lo, &b.lo), up(&a.hi, &b.lo)),
            (Sign::Pos, Sign::Neg) => (down(&a.hi, &b.hi), up(&a.lo, &b.lo)),
            (Sign::Neg, Sign::Neg) => (down(&a.hi, &b.lo), up(&a.lo, &b.hi)),
            (Sign::Mixed, Sign::Neg) => (down(&a.hi, &b.hi), up(&a.lo, &b.hi)),
            (_, Sign::Mixed) => unreachable!("divisor contains zero"),
        };
        FInterval { lo, hi }
    }

    fn sign(&self) -> Sign {
        if !self.lo.is_sign_negative() {
            Sign::Pos
        } else if self.hi.is_sign_negative() || self.hi.is_zero() {
            Sign::Neg
        } else {
            Sign::Mixed
        }
    }
}

/// Sign class of an interval: `Pos` is `lo >= 0`, `Neg` is `hi <= 0`.
#[derive(Clone, Copy)]
enum Sign {
    Pos,
    Neg,
    Mixed,
}

fn min_max(values: [Rational; 4]) -> Interval {
    let mut it = values.into_iter();
    let first = it.next().unwrap();
    let (mut lo, mut hi) = (first.clone(), first);
    for v in it {
        if v < lo {
            lo = v;
        } else if v > hi {
            hi = v;
        }
    }
    Interval { lo, hi }
}

impl From<Scalar> for Interval {
    fn from(x: Scalar) -> Self {
        Interval::point(x)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(12);
        f.write_str(&self.to_decimal_string(digits))
    }
}

impl FromStr for Interval {
    type Err = Error;

    /// Accepts `[lo, hi]` or a single scalar (a point interval).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            Some(body) => {
                let (lo, hi) = body.split_once(',').ok_or_else(|| {
                    Error::Parse(format!("interval literal needs two bounds: {s}"))
                })?;
                Interval::new(parse_scalar(lo)?, parse_scalar(hi)?)
            }
            None => Ok(Interval::point(parse_scalar(s)?)),
        }
    }
}

impl Serialize for Interval {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_decimal_string(DISPLAY_DIGITS))
    }
}

/// Significant digits used for intervals in JSON reports.
pub const DISPLAY_DIGITS: usize = 25;

/// Parses a decimal (`-8.113`, `1e-20`, `2.5E3`) or a fraction (`13/10`)
/// into an exact rational.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let s = s.trim();
    let err = || Error::Parse(format!("not a number: {s:?}"));
    if s.is_empty() {
        return Err(err());
    }
    if s.contains('/') {
        return Rational::from_str(s).map_err(|_| err());
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(err());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer = Integer::from_str(&all_digits).map_err(|_| err())?;
    let scale = exponent - frac_part.len() as i32;
    let mut value = Rational::from(numer);
    if scale >= 0 {
        value *= Integer::from(10u32).pow(scale as u32);
    } else {
        value /= Integer::from(10u32).pow(scale.unsigned_abs());
    }
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Floor of log10(|x|) for nonzero `x`.
fn decimal_exponent(x: &Rational) -> i64 {
    let abs = Rational::from(x.abs_ref());
    // Estimate from bit lengths, then correct by exact comparison.
    let bits = abs.numer().significant_bits() as i64 - abs.denom().significant_bits() as i64;
    let mut e = ((bits as f64) * std::f64::consts::LOG10_2).floor() as i64;
    loop {
        let p = pow10(e);
        if abs < p {
            e -= 1;
        } else if abs >= Rational::from(&p * 10u32) {
            e += 1;
        } else {
            return e;
        }
    }
}

/// Exact `10^e`.
pub fn pow10(e: i64) -> Rational {
    let ten = Integer::from(10u32);
    if e >= 0 {
        Rational::from(ten.pow(e as u32))
    } else {
        Rational::from((Integer::from(1), ten.pow((-e) as u32)))
    }
}

/// Renders `x` with `digits` significant digits, rounded in direction `dir`.
///
/// Plain notation is used for decimal exponents in `-6..21`, scientific
/// notation otherwise. Trailing zeros are trimmed.
pub fn format_scalar(x: &Scalar, digits: usize, dir: Rounding) -> String {
    let digits = digits.max(1);
    if x.cmp0() == Ordering::Equal {
        return "0".to_string();
    }
    let negative = x.cmp0() == Ordering::Less;
    let mut e = decimal_exponent(x);
    let shift = digits as i64 - 1 - e;
    let scaled = Rational::from(x.abs_ref()) * pow10(shift);
    // Rounding the magnitude: toward zero for (Down, positive) or (Up, negative).
    let away = match dir {
        Rounding::Up => !negative,
        Rounding::Down => negative,
        Rounding::Nearest => {
            let frac = &scaled - scaled.clone().floor();
            frac >= Rational::from((1, 2))
        }
    };
    let mut m = if away {
        scaled.ceil().numer().clone()
    } else {
        scaled.floor().numer().clone()
    };
    if m == Integer::from(10u32).pow(digits as u32) {
        m /= 10u32;
        e += 1;
    }
    let mut body = m.to_string();
    debug_assert_eq!(body.len(), digits);
    while body.len() > 1 && body.ends_with('0') {
        body.pop();
    }
    let sign = if negative { "-" } else { "" };
    if (-6..21).contains(&e) {
        let e = e as isize;
        let plain = if e < 0 {
            format!("0.{}{}", "0".repeat((-e - 1) as usize), body)
        } else if (e as usize) + 1 >= body.len() {
            format!("{}{}", body, "0".repeat(e as usize + 1 - body.len()))
        } else {
            let (a, b) = body.split_at(e as usize + 1);
            format!("{a}.{b}")
        };
        format!("{sign}{plain}")
    } else {
        let (a, b) = body.split_at(1);
        if b.is_empty() {
            format!("{sign}{a}e{e}")
        } else {
            format!("{sign}{a}.{b}e{e}")
        }
    }
}

/// Nearest `f64`, for diagnostics and plotting only.
pub fn to_f64(x: &Scalar) -> f64 {
    x.to_f64()
}

/// Natural logarithm of a positive rational with `bits` of precision.
pub fn ln(x: &Scalar, bits: u32) -> Float {
    Float::with_val(bits, x).ln()
}
