//! Interval iterations for enclosing the zero of a bracketed function.
//!
//! [`Method::MooreNewton`] is the classical `X_{k+1} = N(X_k) ∩ X_k`
//! iteration and keeps the zero inside every iterate. The two King-like
//! variants scale the Newton quotient by the scalar corrective factor of
//! King's method; that shifts the slope interval `F'(X)` and the zero can
//! fall out of the produced interval. Every step therefore records an
//! inclusion audit per stage instead of assuming the enclosure holds.

use std::cmp::Ordering;
use std::fmt;
use std::fmt::Write as _;

use rug::Rational;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::interval::{
    format_scalar, pow10, Interval, NumericMode, Rounding, Scalar, DISPLAY_DIGITS,
};
use crate::poly::BracketedFunction;

/// Which interval iteration to run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Method {
    MooreNewton,
    /// Two-point King-like method; Ostrowski-like at `beta = 0`.
    KingLike {
        beta: Scalar,
    },
    /// Three-point variant: a second corrected stage from `Z = K ∩ X`.
    ThreePoint {
        beta: Scalar,
    },
}

impl Method {
    pub fn beta(&self) -> Option<&Scalar> {
        match self {
            Method::MooreNewton => None,
            Method::KingLike { beta } | Method::ThreePoint { beta } => Some(beta),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Method::MooreNewton => "moore-newton",
            Method::KingLike { .. } => "king-like",
            Method::ThreePoint { .. } => "three-point",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.beta() {
            None => f.write_str(self.name()),
            Some(b) => write!(
                f,
                "{}(beta={})",
                self.name(),
                format_scalar(b, 12, Rounding::Nearest)
            ),
        }
    }
}

impl Serialize for Method {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Pipeline stage whose output interval is audited.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    /// `Y = N(X) ∩ X` (the final interval for Moore–Newton).
    Newton,
    /// `K(X, Y) ∩ X`.
    King,
    /// `M(X, Y, Z) ∩ X`.
    ThreePoint,
}

/// Inclusion audit of one stage's intersected interval.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageAudit {
    pub stage: Stage,
    /// Candidate before intersection with `X`.
    pub candidate: Interval,
    /// `candidate ∩ X`; `None` when empty.
    pub interval: Option<Interval>,
    /// `f` changes sign over `interval`. Needs no knowledge of the zero.
    pub sign_change_ok: bool,
    /// Membership of the reference zero, when one was supplied.
    pub known_zero_inside: Option<bool>,
}

impl StageAudit {
    fn new(ctx: &StepContext<'_>, stage: Stage, x: &Interval, candidate: Interval) -> Self {
        let interval = candidate.intersect(x);
        let sign_change_ok = interval
            .as_ref()
            .is_some_and(|i| ctx.f.changes_sign_on_with(i, ctx.mode));
        let zero = ctx.reference_zero;
        let known_zero_inside = zero.map(|z| interval.as_ref().is_some_and(|i| i.contains(z)));
        StageAudit {
            stage,
            candidate,
            interval,
            sign_change_ok,
            known_zero_inside,
        }
    }

    /// Both available witnesses agree the zero is still enclosed.
    pub fn holds(&self) -> bool {
        self.sign_change_ok && self.known_zero_inside != Some(false)
    }
}

/// Everything computed during one iteration.
#[derive(Clone, Debug, Serialize)]
pub struct StepRecord {
    pub k: usize,
    pub x: Interval,
    /// `F'(X)`.
    pub derivative: Interval,
    /// `t = f(md(Y)) / f(md(X))`, as an enclosure (a point in exact mode).
    pub t: Option<Interval>,
    /// `c = (1 + (beta - 2) t) / (1 + beta t)`; absent when `1 + beta t = 0`.
    pub c: Option<Interval>,
    /// Per-stage audits in pipeline order.
    pub stages: Vec<StageAudit>,
    pub x_next: Option<Interval>,
    /// Set when `f` vanished exactly at an evaluated midpoint.
    #[serde(serialize_with = "ser_opt_scalar")]
    pub exact_zero: Option<Scalar>,
    pub sign_change_ok: bool,
    pub known_zero_inside: Option<bool>,
}

fn ser_opt_scalar<S: Serializer>(x: &Option<Scalar>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&format_scalar(v, DISPLAY_DIGITS, Rounding::Nearest)),
        None => s.serialize_none(),
    }
}

impl StepRecord {
    pub fn stage(&self, stage: Stage) -> Option<&StageAudit> {
        self.stages.iter().find(|a| a.stage == stage)
    }

    /// `Y`.
    pub fn y(&self) -> Option<&Interval> {
        self.stage(Stage::Newton).and_then(|a| a.interval.as_ref())
    }

    /// First stage whose audit fails.
    pub fn first_failure(&self) -> Option<&StageAudit> {
        self.stages.iter().find(|a| !a.holds())
    }
}

/// How a run ended.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    Converged,
    InclusionLost {
        k: usize,
        stage: Stage,
    },
    EmptyIntersection {
        k: usize,
        stage: Stage,
    },
    DegenerateFactor {
        k: usize,
    },
    DerivativeStraddlesZero {
        k: usize,
    },
    /// Float mode only: `f(md(X_k))` could not be told apart from zero, so
    /// `t` is undefined at this precision. `X_k` is kept as the result.
    PrecisionLimit {
        k: usize,
    },
    MaxIterations,
}

impl Outcome {
    /// Outcomes counted as a method failure in the randomized study.
    pub fn is_inclusion_failure(&self) -> bool {
        matches!(
            self,
            Outcome::InclusionLost { .. } | Outcome::EmptyIntersection { .. }
        )
    }

    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Converged => "converged",
            Outcome::InclusionLost { .. } => "inclusion_lost",
            Outcome::EmptyIntersection { .. } => "empty_intersection",
            Outcome::DegenerateFactor { .. } => "degenerate_factor",
            Outcome::DerivativeStraddlesZero { .. } => "derivative_straddles_zero",
            Outcome::PrecisionLimit { .. } => "precision_limit",
            Outcome::MaxIterations => "max_iterations",
        }
    }
}

/// Complete record of one run.
#[derive(Clone, Debug, Serialize)]
pub struct EnclosureTrace {
    pub method: Method,
    #[serde(serialize_with = "ser_opt_scalar")]
    pub beta: Option<Scalar>,
    pub mode: NumericMode,
    pub steps: Vec<StepRecord>,
    pub outcome: Outcome,
    /// Last interval known to be produced by the method.
    #[serde(rename = "final")]
    pub final_interval: Interval,
}

impl EnclosureTrace {
    /// The sequence `X_0, X_1, ...` of produced intervals.
    pub fn intervals(&self) -> Vec<&Interval> {
        let mut v: Vec<&Interval> = self.steps.iter().map(|s| &s.x).collect();
        if let Some(last) = self.steps.last().and_then(|s| s.x_next.as_ref()) {
            v.push(last);
        } else if self.steps.is_empty() {
            v.push(&self.final_interval);
        }
        v
    }

    pub fn radii(&self) -> Vec<Scalar> {
        self.intervals().into_iter().map(Interval::radius).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("trace serializes")
    }

    /// One row per audited stage.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "k,x,derivative,t,c,stage,candidate,interval,sign_change_ok,known_zero_inside\n",
        );
        let opt = |i: Option<&Interval>| {
            i.map_or("empty".to_string(), |i| {
                format!("\"{}\"", i.to_decimal_string(DISPLAY_DIGITS))
            })
        };
        for s in &self.steps {
            for a in &s.stages {
                let _ = writeln!(
                    out,
                    "{},\"{}\",\"{}\",{},{},{:?},\"{}\",{},{},{}",
                    s.k,
                    s.x.to_decimal_string(DISPLAY_DIGITS),
                    s.derivative.to_decimal_string(DISPLAY_DIGITS),
                    s.t.as_ref().map_or(String::new(), |t| opt(Some(t))),
                    s.c.as_ref().map_or(String::new(), |c| opt(Some(c))),
                    a.stage,
                    a.candidate.to_decimal_string(DISPLAY_DIGITS),
                    opt(a.interval.as_ref()),
                    a.sign_change_ok,
                    a.known_zero_inside.map_or(String::new(), |b| b.to_string()),
                );
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} ({} steps)", self.method_label(), self.steps.len());
        for s in &self.steps {
            let _ = writeln!(out, "k = {}: X = {}  F'(X) = {}", s.k, s.x, s.derivative);
            if let Some(t) = &s.t {
                let c =
                    s.c.as_ref()
                        .map_or("undefined".to_string(), |c| c.to_string());
                let _ = writeln!(out, "    t = {t}  c = {c}");
            }
            for a in &s.stages {
                let kept = match (a.sign_change_ok, a.known_zero_inside) {
                    (true, Some(true)) | (true, None) => "kept",
                    _ => "LOST",
                };
                let interval = a
                    .interval
                    .as_ref()
                    .map_or("empty".to_string(), |i| i.to_string());
                let _ = writeln!(
                    out,
                    "    {:<11} candidate {}  ∩ X = {}  zero {}",
                    format!("{:?}", a.stage),
                    a.candidate,
                    interval,
                    kept
                );
            }
            if let Some(z) = &s.exact_zero {
                let _ = writeln!(
                    out,
                    "    exact zero at {}",
                    format_scalar(z, DISPLAY_DIGITS, Rounding::Nearest)
                );
            }
        }
        let _ = writeln!(out, "outcome: {}", self.outcome_label());
        let _ = writeln!(
            out,
            "final: {}  (radius {})",
            self.final_interval,
            format_scalar(&self.final_interval.radius(), 6, Rounding::Up)
        );
        out
    }

    fn method_label(&self) -> String {
        let mode = match self.mode {
            NumericMode::Exact => "exact".to_string(),
            NumericMode::Float { digits } => format!("float, {digits} digits"),
        };
        format!("{} [{mode}]", self.method)
    }

    fn outcome_label(&self) -> String {
        match &self.outcome {
            Outcome::InclusionLost { k, stage } | Outcome::EmptyIntersection { k, stage } => {
                format!("{} at k = {k} ({stage:?} stage)", self.outcome.label())
            }
            Outcome::DegenerateFactor { k }
            | Outcome::DerivativeStraddlesZero { k }
            | Outcome::PrecisionLimit { k } => {
                format!("{} at k = {k}", self.outcome.label())
            }
            o => o.label().to_string(),
        }
    }
}

/// Configuration shared by the step functions.
#[derive(Clone, Copy, Debug)]
pub struct StepContext<'a> {
    pub f: &'a BracketedFunction,
    pub mode: NumericMode,
    pub reference_zero: Option<&'a Scalar>,
}

impl<'a> StepContext<'a> {
    pub fn new(f: &'a BracketedFunction) -> Self {
        StepContext {
            f,
            mode: NumericMode::Exact,
            reference_zero: None,
        }
    }

    pub fn with_mode(mut self, mode: NumericMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_zero(mut self, zero: &'a Scalar) -> Self {
        self.reference_zero = Some(zero);
        self
    }

    fn f_at(&self, x: &Scalar) -> Interval {
        self.f.poly().eval_point(x, self.mode)
    }

    fn audit(&self, stage: Stage, x: &Interval, candidate: Interval) -> StageAudit {
        StageAudit::new(self, stage, x, candidate)
    }
}

/// `at - f(at) / F'(X)`. Contains the zero of `f` in `x` whenever `at ∈ x`.
pub fn newton_operator(
    f: &BracketedFunction,
    x: &Interval,
    at: &Scalar,
    mode: NumericMode,
) -> Result<Interval> {
    let d = f.derivative_range(x, mode);
    let fx = f.poly().eval_point(at, mode);
    newton_with(&d, at, &fx, mode)
}

fn newton_with(d: &Interval, at: &Scalar, fx: &Interval, mode: NumericMode) -> Result<Interval> {
    let q = fx
        .div(d, mode)
        .map_err(|_| Error::DerivativeStraddlesZero)?;
    Ok(Interval::point(at.clone()).sub(&q, mode))
}

/// Exact test for `f(at) = 0`, skipping the exact evaluation when the
/// enclosure already excludes zero.
fn vanishes(enclosure: &Interval, ctx: &StepContext<'_>, at: &Scalar) -> bool {
    enclosure.contains_zero() && ctx.f.poly().sign_exact(at) == Ordering::Equal
}

/// State shared by the King-like pipelines after the Newton stage.
struct Prelude {
    derivative: Interval,
    newton: StageAudit,
    f_mid_x: Interval,
}

enum Start {
    Continue(Prelude),
    Done(StepRecord),
}

fn prelude(ctx: &StepContext<'_>, k: usize, x: &Interval) -> Result<Start> {
    let derivative = ctx.f.derivative_range(x, ctx.mode);
    if derivative.contains_zero() {
        return Err(Error::DerivativeStraddlesZero);
    }
    let mid_x = x.midpoint();
    let f_mid_x = ctx.f_at(&mid_x);
    let candidate = newton_with(&derivative, &mid_x, &f_mid_x, ctx.mode)?;
    let newton = ctx.audit(Stage::Newton, x, candidate);
    if vanishes(&f_mid_x, ctx, &mid_x) {
        return Ok(Start::Done(finish(
            ctx,
            k,
            x,
            derivative,
            vec![newton],
            None,
            None,
            Some(mid_x),
        )));
    }
    Ok(Start::Continue(Prelude {
        derivative,
        newton,
        f_mid_x,
    }))
}

#[allow(clippy::too_many_arguments)]
fn finish(
    ctx: &StepContext<'_>,
    k: usize,
    x: &Interval,
    derivative: Interval,
    stages: Vec<StageAudit>,
    t: Option<Interval>,
    c: Option<Interval>,
    exact_zero: Option<Scalar>,
) -> StepRecord {
    let x_next = match &exact_zero {
        Some(z) => Some(Interval::point(z.clone())),
        None => stages.last().and_then(|a| a.interval.clone()),
    };
    let sign_change_ok = x_next
        .as_ref()
        .is_some_and(|i| ctx.f.changes_sign_on_with(i, ctx.mode));
    let known_zero_inside = ctx
        .reference_zero
        .map(|z| x_next.as_ref().is_some_and(|i| i.contains(z)));
    StepRecord {
        k,
        x: x.clone(),
        derivative,
        t,
        c,
        stages,
        x_next,
        exact_zero,
        sign_change_ok,
        known_zero_inside,
    }
}

/// One Moore–Newton step: `X_next = N(X) ∩ X` with `N` taken at `md(X)`.
pub fn moore_newton_step(ctx: &StepContext<'_>, k: usize, x: &Interval) -> Result<StepRecord> {
    match prelude(ctx, k, x)? {
        Start::Done(rec) => Ok(rec),
        Start::Continue(p) => Ok(finish(
            ctx,
            k,
            x,
            p.derivative,
            vec![p.newton],
            None,
            None,
            None,
        )),
    }
}

/// Corrective multiplier `(1 + beta t) / (1 + (beta - 2) t)` and its
/// reciprocal `c`, both as enclosures.
fn corrective_factor(
    t: &Interval,
    beta: &Scalar,
    mode: NumericMode,
) -> Result<(Interval, Option<Interval>)> {
    let one = Interval::point(Rational::from(1));
    let num = one.add(&t.scale(beta, mode), mode);
    let den = one.add(&t.scale(&Rational::from(beta - 2u32), mode), mode);
    let factor = num.div(&den, mode).map_err(|_| Error::DegenerateFactor)?;
    let c = den.div(&num, mode).ok();
    Ok((factor, c))
}

/// `at - factor * f(at) / F'(X)`.
fn corrected_candidate(
    factor: &Interval,
    at: &Scalar,
    f_at: &Interval,
    derivative: &Interval,
    mode: NumericMode,
) -> Result<Interval> {
    let scaled = factor.mul(f_at, mode);
    let q = scaled
        .div(derivative, mode)
        .map_err(|_| Error::DerivativeStraddlesZero)?;
    Ok(Interval::point(at.clone()).sub(&q, mode))
}

struct KingStage {
    prelude: Prelude,
    t: Interval,
    factor: Interval,
    c: Option<Interval>,
    king: StageAudit,
}

fn king_stage(
    ctx: &StepContext<'_>,
    k: usize,
    x: &Interval,
    beta: &Scalar,
) -> Result<std::result::Result<KingStage, StepRecord>> {
    let p = match prelude(ctx, k, x)? {
        Start::Done(rec) => return Ok(Err(rec)),
        Start::Continue(p) => p,
    };
    let Some(y) = p.newton.interval.clone() else {
        return Ok(Err(finish(
            ctx,
            k,
            x,
            p.derivative,
            vec![p.newton],
            None,
            None,
            None,
        )));
    };
    let mid_y = y.midpoint();
    let f_mid_y = ctx.f_at(&mid_y);
    if vanishes(&f_mid_y, ctx, &mid_y) {
        return Ok(Err(finish(
            ctx,
            k,
            x,
            p.derivative,
            vec![p.newton],
            None,
            None,
            Some(mid_y),
        )));
    }
    let t = f_mid_y
        .div(&p.f_mid_x, ctx.mode)
        .map_err(|_| Error::PrecisionExhausted)?;
    let (factor, c) = corrective_factor(&t, beta, ctx.mode)?;
    let candidate = corrected_candidate(&factor, &mid_y, &f_mid_y, &p.derivative, ctx.mode)?;
    let king = ctx.audit(Stage::King, x, candidate);
    Ok(Ok(KingStage {
        prelude: p,
        t,
        factor,
        c,
        king,
    }))
}

/// One step of the two-point King-like method:
///
/// ```text
/// Y      = N(X) ∩ X
/// K(X,Y) = md(Y) - (1 + beta t)/(1 + (beta - 2) t) * f(md(Y)) / F'(X)
/// X_next = K(X,Y) ∩ X
/// ```
///
/// Nothing guarantees that the zero stays in `X_next`.
pub fn kinglike_step(
    ctx: &StepContext<'_>,
    k: usize,
    x: &Interval,
    beta: &Scalar,
) -> Result<StepRecord> {
    match king_stage(ctx, k, x, beta)? {
        Err(rec) => Ok(rec),
        Ok(ks) => Ok(finish(
            ctx,
            k,
            x,
            ks.prelude.derivative,
            vec![ks.prelude.newton, ks.king],
            Some(ks.t),
            ks.c,
            None,
        )),
    }
}

/// One step of the three-point variant. `Z = K(X,Y) ∩ X`, then
/// `M = md(Z) - factor * f(md(Z)) / F'(X)` with the factor (and `t`) of the
/// first stage, and `X_next = M ∩ X`.
pub fn threepoint_step(
    ctx: &StepContext<'_>,
    k: usize,
    x: &Interval,
    beta: &Scalar,
) -> Result<StepRecord> {
    let ks = match king_stage(ctx, k, x, beta)? {
        Err(rec) => return Ok(rec),
        Ok(ks) => ks,
    };
    let KingStage {
        prelude: p,
        t,
        factor,
        c,
        king,
    } = ks;
    let Some(z) = king.interval.clone() else {
        return Ok(finish(
            ctx,
            k,
            x,
            p.derivative,
            vec![p.newton, king],
            Some(t),
            c,
            None,
        ));
    };
    let mid_z = z.midpoint();
    let f_mid_z = ctx.f_at(&mid_z);
    if vanishes(&f_mid_z, ctx, &mid_z) {
        return Ok(finish(
            ctx,
            k,
            x,
            p.derivative,
            vec![p.newton, king],
            Some(t),
            c,
            Some(mid_z),
        ));
    }
    let candidate = corrected_candidate(&factor, &mid_z, &f_mid_z, &p.derivative, ctx.mode)?;
    let m = ctx.audit(Stage::ThreePoint, x, candidate);
    Ok(finish(
        ctx,
        k,
        x,
        p.derivative,
        vec![p.newton, king, m],
        Some(t),
        c,
        None,
    ))
}

/// Dispatches one step of `method`.
pub fn step(method: &Method, ctx: &StepContext<'_>, k: usize, x: &Interval) -> Result<StepRecord> {
    match method {
        Method::MooreNewton => moore_newton_step(ctx, k, x),
        Method::KingLike { beta } => kinglike_step(ctx, k, x, beta),
        Method::ThreePoint { beta } => threepoint_step(ctx, k, x, beta),
    }
}

/// Run parameters for [`run_enclosure`].
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub mode: NumericMode,
    /// Stop once `rd(X_k) <= tol`.
    pub tol: Scalar,
    pub max_iter: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mode: NumericMode::Exact,
            tol: pow10(-50),
            max_iter: 12,
        }
    }
}

/// Iterates `method` from `x0` until the radius drops to `cfg.tol`, the
/// method fails, or `cfg.max_iter` steps have run. Step failures become
/// trace outcomes.
pub fn run_enclosure(
    method: &Method,
    f: &BracketedFunction,
    x0: &Interval,
    cfg: &RunConfig,
    reference_zero: Option<&Scalar>,
) -> EnclosureTrace {
    let mut ctx = StepContext::new(f).with_mode(cfg.mode);
    ctx.reference_zero = reference_zero;
    let mut x = cfg.mode.outward(x0.clone());
    let mut steps = Vec::new();
    let mut outcome = Outcome::MaxIterations;
    for k in 0..cfg.max_iter {
        if x.radius() <= cfg.tol {
            outcome = Outcome::Converged;
            break;
        }
        let rec = match step(method, &ctx, k, &x) {
            Ok(rec) => rec,
            Err(e) => {
                outcome = match e {
                    Error::DegenerateFactor => Outcome::DegenerateFactor { k },
                    Error::PrecisionExhausted => Outcome::PrecisionLimit { k },
                    Error::DerivativeStraddlesZero => Outcome::DerivativeStraddlesZero { k },
                    other => unreachable!("step raised {other:?}"),
                };
                break;
            }
        };
        let failure = rec.first_failure().map(|a| match a.interval {
            None => Outcome::EmptyIntersection { k, stage: a.stage },
            Some(_) => Outcome::InclusionLost { k, stage: a.stage },
        });
        let exact = rec.exact_zero.is_some();
        let next = rec.x_next.clone();
        steps.push(rec);
        if let Some(fail) = failure {
            // An exact zero found after an earlier stage lost inclusion is
            // still a loss for the method as run.
            outcome = fail;
            break;
        }
        if exact {
            outcome = Outcome::Converged;
            x = next.expect("exact zero yields a point interval");
            break;
        }
        x = next.expect("audited stages are nonempty");
    }
    if outcome == Outcome::MaxIterations && x.radius() <= cfg.tol {
        outcome = Outcome::Converged;
    }
    EnclosureTrace {
        method: method.clone(),
        beta: method.beta().cloned(),
        mode: cfg.mode,
        steps,
        outcome,
        final_interval: x,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::parse_scalar;
    use crate::poly::Polynomial;

    fn q(s: &str) -> Scalar {
        parse_scalar(s).unwrap()
    }

    fn iv(lo: &str, hi: &str) -> Interval {
        Interval::new(q(lo), q(hi)).unwrap()
    }

    fn bracket(coeffs: &[i64], lo: &str, hi: &str) -> BracketedFunction {
        BracketedFunction::check(Polynomial::from_ints(coeffs), iv(lo, hi)).unwrap()
    }

    fn close(x: &Scalar, printed: &str, tol: &str) -> bool {
        (x - q(printed)).abs() <= q(tol)
    }

    #[test]
    fn newton_operator_examples() {
        let f = bracket(&[-12, 0, 1, 1], "0.5", "2.1");
        let n = newton_operator(&f, &iv("0.5", "2.1"), &q("1.3"), NumericMode::Exact).unwrap();
        assert!(close(n.lo(), "1.76546", "5e-6"));
        assert_eq!(n.hi(), &q("5.936"));

        let g = bracket(&[-1, 1], "0", "3");
        assert_eq!(
            newton_operator(&g, &iv("0", "3"), &q("1.5"), NumericMode::Exact).unwrap(),
            iv("1", "1")
        );

        let h = bracket(&[-4, 0, 1], "1", "4");
        assert_eq!(
            newton_operator(&h, &iv("1", "4"), &q("2.5"), NumericMode::Exact).unwrap(),
            iv("1.375", "2.21875")
        );
    }

    #[test]
    fn moore_newton_step_examples() {
        let zero = q("2");
        let h = bracket(&[-4, 0, 1], "1", "4");
        let ctx = StepContext::new(&h).with_zero(&zero);
        let rec = moore_newton_step(&ctx, 0, &iv("1", "4")).unwrap();
        assert_eq!(rec.x_next, Some(iv("1.375", "2.21875")));
        assert_eq!(rec.known_zero_inside, Some(true));
        assert!(rec.sign_change_ok);

        let one = q("1");
        let g = bracket(&[-1, 1], "0", "3");
        let ctx = StepContext::new(&g).with_zero(&one);
        let rec = moore_newton_step(&ctx, 0, &iv("0", "3")).unwrap();
        assert_eq!(rec.x_next, Some(iv("1", "1")));

        let f = bracket(&[-12, 0, 1, 1], "0.5", "2.1");
        let ctx = StepContext::new(&f).with_zero(&zero);
        let rec = moore_newton_step(&ctx, 0, &iv("0.5", "2.1")).unwrap();
        let next = rec.x_next.unwrap();
        assert!(close(next.lo(), "1.76546", "5e-6"));
        assert_eq!(next.hi(), &q("2.1"));
        assert!(next.contains(&zero));
    }

    #[test]
    fn ostrowski_like_loses_zero_on_first_counterexample() {
        let zero = q("2");
        let f = bracket(&[-12, 0, 1, 1], "0.5", "2.1");
        let ctx = StepContext::new(&f).with_zero(&zero);
        let rec = kinglike_step(&ctx, 0, &iv("0.5", "2.1"), &q("0")).unwrap();
        let king = rec.stage(Stage::King).unwrap();
        assert!(close(king.candidate.lo(), "2.01348", "5e-4"));
        assert!(close(king.candidate.hi(), "2.73702", "5e-4"));
        assert_eq!(king.known_zero_inside, Some(false));
        assert!(!king.sign_change_ok);
        let y = rec.y().unwrap();
        assert!(close(y.lo(), "1.76546", "5e-4"));
        // beta = 0: c = 1 - 2t
        let t = rec.t.clone().unwrap();
        assert!(t.is_point());
        let c = rec.c.clone().unwrap();
        assert_eq!(
            c.lo(),
            &(Rational::from(1) - Rational::from(2) * t.lo().clone())
        );
    }

    #[test]
    fn king_like_loses_zero_on_second_counterexample() {
        let zero = q("2");
        let f = bracket(&[-8, 0, 0, 1], "1.5", "2.3");
        let ctx = StepContext::new(&f).with_zero(&zero);
        let rec = kinglike_step(&ctx, 0, &iv("1.5", "2.3"), &q("5")).unwrap();
        let king = rec.stage(Stage::King).unwrap();
        assert!(
            close(king.candidate.lo(), "2.024393", "5e-6"),
            "{}",
            king.candidate
        );
        assert!(
            close(king.candidate.hi(), "2.029699", "5e-6"),
            "{}",
            king.candidate
        );
        assert_eq!(rec.known_zero_inside, Some(false));
    }

    #[test]
    fn linear_function_collapses_at_newton_stage() {
        let one = q("1");
        let g = bracket(&[-1, 1], "0", "3");
        let ctx = StepContext::new(&g).with_zero(&one);
        for rec in [
            kinglike_step(&ctx, 0, &iv("0", "3"), &q("0")).unwrap(),
            threepoint_step(&ctx, 0, &iv("0", "3"), &q("0")).unwrap(),
        ] {
            assert_eq!(rec.exact_zero, Some(q("1")));
            assert_eq!(rec.x_next, Some(iv("1", "1")));
            assert_eq!(rec.stages.len(), 1);
        }
    }

    #[test]
    fn three_point_flags_king_stage() {
        let zero = q("2");
        let f = bracket(&[-8, 0, 0, 1], "1.5", "2.3");
        let trace = run_enclosure(
            &Method::ThreePoint { beta: q("5") },
            &f,
            &iv("1.5", "2.3"),
            &RunConfig::default(),
            Some(&zero),
        );
        assert_eq!(
            trace.outcome,
            Outcome::InclusionLost {
                k: 0,
                stage: Stage::King
            }
        );

        let f = bracket(&[-12, 0, 1, 1], "0.5", "2.1");
        let trace = run_enclosure(
            &Method::ThreePoint { beta: q("0") },
            &f,
            &iv("0.5", "2.1"),
            &RunConfig::default(),
            Some(&zero),
        );
        assert_eq!(
            trace.outcome,
            Outcome::InclusionLost {
                k: 0,
                stage: Stage::King
            }
        );
    }

    #[test]
    fn runs_report_outcomes() {
        let zero = q("2");
        let f = bracket(&[-12, 0, 1, 1], "0.5", "2.1");
        let x0 = iv("0.5", "2.1");
        let mn = run_enclosure(
            &Method::MooreNewton,
            &f,
            &x0,
            &RunConfig::default(),
            Some(&zero),
        );
        assert_eq!(mn.outcome, Outcome::Converged);
        assert!(mn.steps.iter().all(|s| s.known_zero_inside == Some(true)));
        assert!(mn.final_interval.contains(&zero));

        let kl = run_enclosure(
            &Method::KingLike { beta: q("0") },
            &f,
            &x0,
            &RunConfig::default(),
            Some(&zero),
        );
        assert_eq!(
            kl.outcome,
            Outcome::InclusionLost {
                k: 0,
                stage: Stage::King
            }
        );

        let g = bracket(&[-8, 0, 0, 1], "1.5", "2.3");
        let kl = run_enclosure(
            &Method::KingLike { beta: q("5") },
            &g,
            &iv("1.5", "2.3"),
            &RunConfig::default(),
            Some(&zero),
        );
        assert_eq!(
            kl.outcome,
            Outcome::InclusionLost {
                k: 0,
                stage: Stage::King
            }
        );
    }

    #[test]
    fn degenerate_factor_is_reported() {
        // beta = 2 makes the denominator 1 + 0*t = 1; pick beta so that
        // 1 + (beta - 2) t = 0 for the first step on x^2 - 4 over [1, 4].
        let h = bracket(&[-4, 0, 1], "1", "4");
        let x = iv("1", "4");
        let ctx = StepContext::new(&h);
        let rec = kinglike_step(&ctx, 0, &x, &q("0")).unwrap();
        let t = rec.t.unwrap().lo().clone();
        let beta = Rational::from(2) - Rational::from(1) / t;
        let err = kinglike_step(&ctx, 0, &x, &beta).unwrap_err();
        assert_eq!(err, Error::DegenerateFactor);
        let trace = run_enclosure(
            &Method::KingLike { beta },
            &h,
            &x,
            &RunConfig::default(),
            None,
        );
        assert_eq!(trace.outcome, Outcome::DegenerateFactor { k: 0 });
    }

    #[test]
    fn float_mode_encloses_exact_result() {
        let zero = q("2");
        let f = bracket(&[-12, 0, 1, 1], "0.5", "2.1");
        let x0 = iv("0.5", "2.1");
        let exact = kinglike_step(&StepContext::new(&f), 0, &x0, &q("0")).unwrap();
        let fl = kinglike_step(
            &StepContext::new(&f)
                .with_mode(NumericMode::float(30))
                .with_zero(&zero),
            0,
            &NumericMode::float(30).outward(x0),
            &q("0"),
        )
        .unwrap();
        let e = &exact.stage(Stage::King).unwrap().candidate;
        let r = &fl.stage(Stage::King).unwrap().candidate;
        assert!(e.is_subset(r));
        assert_eq!(fl.known_zero_inside, Some(false));
    }

    #[test]
    fn trace_json_has_decimal_intervals() {
        let f = bracket(&[-4, 0, 1], "1", "4");
        let trace = run_enclosure(
            &Method::MooreNewton,
            &f,
            &iv("1", "4"),
            &RunConfig::default(),
            None,
        );
        let json = trace.to_json();
        assert_eq!(json["method"], "moore-newton");
        assert_eq!(json["outcome"]["kind"], "converged");
        assert_eq!(json["steps"][0]["x"], "[1, 4]");
        assert_eq!(json["steps"][0]["x_next"], "[1.375, 2.21875]");
    }
}
