//! The two counterexamples: one King-like step from a valid bracket whose
//! result excludes the zero, compared against published digits, with a
//! Moore–Newton run on the same input as contrast.

use std::fmt::Write as _;

use rug::Rational;
use serde::Serialize;

use crate::enclosure::{kinglike_step, run_enclosure, Method, Outcome, RunConfig, StepContext};
use crate::interval::{
    format_scalar, parse_scalar, pow10, Interval, NumericMode, Rounding, Scalar,
};
use crate::poly::{BracketedFunction, Polynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Example {
    /// `x^3 + x^2 - 12` on `[0.5, 2.1]`, `beta = 0`.
    Example1,
    /// `x^3 - 8` on `[1.5, 2.3]`, `beta = 5`.
    Example2,
}

impl Example {
    pub fn function(self) -> BracketedFunction {
        let (coeffs, lo, hi): (&[i64], &str, &str) = match self {
            Example::Example1 => (&[-12, 0, 1, 1], "0.5", "2.1"),
            Example::Example2 => (&[-8, 0, 0, 1], "1.5", "2.3"),
        };
        let x0 = Interval::new(parse_scalar(lo).unwrap(), parse_scalar(hi).unwrap()).unwrap();
        BracketedFunction::check(Polynomial::from_ints(coeffs), x0).expect("example is bracketed")
    }

    pub fn beta(self) -> Scalar {
        match self {
            Example::Example1 => Rational::new(),
            Example::Example2 => Rational::from(5),
        }
    }

    pub fn zero(self) -> Scalar {
        Rational::from(2)
    }

    fn tolerance(self) -> Scalar {
        match self {
            Example::Example1 => Rational::from(5) * pow10(-4),
            Example::Example2 => Rational::from(5) * pow10(-6),
        }
    }
}

/// One compared quantity.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub quantity: String,
    pub expected: String,
    pub computed: String,
    pub tolerance: Option<String>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Contrast {
    pub method: Method,
    pub outcome: Outcome,
    pub steps: usize,
    /// Every step kept the zero by both witnesses.
    pub inclusion_every_step: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExampleReport {
    pub example: Example,
    pub function: String,
    pub x0: Interval,
    #[serde(serialize_with = "crate::lab::ser_scalar")]
    pub beta: Scalar,
    pub mode: NumericMode,
    pub checks: Vec<Check>,
    pub contrast: Contrast,
    pub pass: bool,
}

fn endpoint_check(name: &str, expected: &str, computed: &Scalar, tol: &Scalar) -> Check {
    let e = parse_scalar(expected).expect("printed literal");
    let diff = Rational::from(computed - &e).abs();
    Check {
        quantity: name.to_string(),
        expected: expected.to_string(),
        computed: format_scalar(computed, 12, Rounding::Nearest),
        tolerance: Some(format_scalar(tol, 3, Rounding::Nearest)),
        pass: diff <= *tol,
    }
}

fn interval_checks(
    name: &str,
    expected: [&str; 2],
    computed: Option<&Interval>,
    tol: &Scalar,
) -> Vec<Check> {
    match computed {
        Some(i) => vec![
            endpoint_check(&format!("{name}.lo"), expected[0], i.lo(), tol),
            endpoint_check(&format!("{name}.hi"), expected[1], i.hi(), tol),
        ],
        None => vec![Check {
            quantity: name.to_string(),
            expected: format!("[{}, {}]", expected[0], expected[1]),
            computed: "empty".into(),
            tolerance: None,
            pass: false,
        }],
    }
}

fn membership_check(name: &str, expected: bool, computed: Option<bool>) -> Check {
    Check {
        quantity: name.to_string(),
        expected: expected.to_string(),
        computed: computed.map_or("undefined".into(), |b| b.to_string()),
        tolerance: None,
        pass: computed == Some(expected),
    }
}

/// Runs the pinned configuration of `which` and compares it against the
/// published values.
pub fn reproduce_example(which: Example, mode: NumericMode) -> ExampleReport {
    let f = which.function();
    let x0 = f.domain().clone();
    let zero = which.zero();
    let beta = which.beta();
    let tol = which.tolerance();
    let ctx = StepContext::new(&f).with_mode(mode).with_zero(&zero);

    let mut checks = Vec::new();
    match kinglike_step(&ctx, 0, &x0, &beta) {
        Ok(rec) => {
            let n = rec.stages.first().map(|a| &a.candidate);
            let k = rec.stages.get(1).map(|a| &a.candidate);
            if which == Example::Example1 {
                checks.extend(interval_checks("N(X0)", ["1.76546", "5.936"], n, &tol));
                checks.extend(interval_checks("Y0", ["1.76546", "2.1"], rec.y(), &tol));
            }
            let printed = match which {
                Example::Example1 => ["2.01348", "2.73702"],
                Example::Example2 => ["2.024393", "2.029699"],
            };
            checks.extend(interval_checks("K(X0,Y0)", printed, k, &tol));
            if which == Example::Example1 {
                checks.push(membership_check(
                    "2 in N(X0)",
                    true,
                    n.map(|i| i.contains(&zero)),
                ));
            }
            checks.push(membership_check(
                "2 in K(X0,Y0)",
                false,
                k.map(|i| i.contains(&zero)),
            ));
        }
        Err(e) => checks.push(Check {
            quantity: "King-like step".into(),
            expected: "completes".into(),
            computed: e.to_string(),
            tolerance: None,
            pass: false,
        }),
    }

    let cfg = RunConfig {
        mode,
        ..RunConfig::default()
    };
    let trace = run_enclosure(&Method::MooreNewton, &f, &x0, &cfg, Some(&zero));
    let inclusion_every_step = trace
        .steps
        .iter()
        .all(|s| s.sign_change_ok && s.known_zero_inside == Some(true));
    let contrast = Contrast {
        method: Method::MooreNewton,
        pass: inclusion_every_step && trace.outcome == Outcome::Converged,
        outcome: trace.outcome,
        steps: trace.steps.len(),
        inclusion_every_step,
    };
    let pass = checks.iter().all(|c| c.pass) && contrast.pass;
    ExampleReport {
        example: which,
        function: f.poly().to_string(),
        x0,
        beta,
        mode,
        checks,
        contrast,
        pass,
    }
}

impl ExampleReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("quantity,expected,computed,tolerance,pass\n");
        for c in &self.checks {
            let _ = writeln!(
                out,
                "\"{}\",\"{}\",\"{}\",{},{}",
                c.quantity,
                c.expected,
                c.computed,
                c.tolerance.clone().unwrap_or_default(),
                if c.pass { "PASS" } else { "FAIL" }
            );
        }
        let _ = writeln!(
            out,
            "moore-newton contrast,converged with inclusion,{} after {} steps,,{}",
            self.contrast.outcome.label(),
            self.contrast.steps,
            if self.contrast.pass { "PASS" } else { "FAIL" }
        );
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:?}: f(x) = {}, X0 = {}, beta = {}",
            self.example,
            self.function,
            self.x0,
            format_scalar(&self.beta, 6, Rounding::Nearest)
        );
        for c in &self.checks {
            let tol = c
                .tolerance
                .as_ref()
                .map(|t| format!(" (tol {t})"))
                .unwrap_or_default();
            let _ = writeln!(
                out,
                "  {:<5} {:<16} expected {:<10} computed {}{}",
                if c.pass { "PASS" } else { "FAIL" },
                c.quantity,
                c.expected,
                c.computed,
                tol
            );
        }
        let _ = writeln!(
            out,
            "  {:<5} Moore-Newton on the same input: {} after {} steps, zero kept every step: {}",
            if self.contrast.pass { "PASS" } else { "FAIL" },
            self.contrast.outcome.label(),
            self.contrast.steps,
            self.contrast.inclusion_every_step
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_examples_pass_in_exact_mode() {
        for which in [Example::Example1, Example::Example2] {
            let r = reproduce_example(which, NumericMode::Exact);
            assert!(r.pass, "{}", r.to_text());
        }
        assert_eq!(
            reproduce_example(Example::Example1, NumericMode::Exact)
                .checks
                .len(),
            8
        );
    }

    #[test]
    fn float_mode_agrees() {
        for which in [Example::Example1, Example::Example2] {
            assert!(reproduce_example(which, NumericMode::float(100)).pass);
        }
    }
}
