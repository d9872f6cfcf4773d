//! Plot data for the geometric pictures of one Newton step and of the
//! failing King-like step. Everything is emitted as numeric series; exact
//! values are given as decimal strings alongside.

use std::fmt::Write as _;

use rug::Rational;
use serde::Serialize;

use crate::enclosure::{kinglike_step, newton_operator, StepContext};
use crate::interval::{format_scalar, to_f64, Interval, NumericMode, Rounding, Scalar};
use crate::lab::examples::Example;
use crate::poly::{BracketedFunction, Polynomial};

const SAMPLES: usize = 201;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Figure {
    /// Moore–Newton step on `x^2 - 4`, `X = [1, 4]`.
    Fig1,
    /// Ostrowski-like step on `x^3 + x^2 - 12`, `X = [0.5, 2.1]`.
    Fig2,
}

#[derive(Clone, Debug, Serialize)]
pub struct Point {
    pub x: String,
    pub y: String,
}

impl Point {
    fn new(x: &Scalar, y: &Scalar) -> Self {
        Point {
            x: dec(x),
            y: dec(y),
        }
    }
}

/// Line of slope `slope` through `through`, with its zero crossing and the
/// segment clipped to the plotting window.
#[derive(Clone, Debug, Serialize)]
pub struct SlopeLine {
    pub label: String,
    pub slope: String,
    pub through: Point,
    pub x_intercept: String,
    pub segment: [[f64; 2]; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct NamedInterval {
    pub label: String,
    pub interval: Interval,
}

#[derive(Clone, Debug, Serialize)]
pub struct FigureData {
    pub figure: Figure,
    pub title: String,
    pub function: String,
    pub domain: Interval,
    pub zero: String,
    pub window: [f64; 2],
    pub curve: Vec<[f64; 2]>,
    pub lines: Vec<SlopeLine>,
    pub candidates: Vec<NamedInterval>,
    /// `t = f(md(Y)) / f(md(X))`.
    pub t: Option<String>,
    /// `c = (1 + (beta - 2) t) / (1 + beta t)`.
    pub c: Option<String>,
}

fn dec(x: &Scalar) -> String {
    format_scalar(x, 12, Rounding::Nearest)
}

fn slope_line(
    label: &str,
    slope: &Scalar,
    x0: &Scalar,
    y0: &Scalar,
    window: [f64; 2],
) -> SlopeLine {
    let intercept = x0 - Rational::from(y0 / slope);
    let (s, px, py) = (to_f64(slope), to_f64(x0), to_f64(y0));
    let at = |x: f64| [x, py + s * (x - px)];
    SlopeLine {
        label: label.to_string(),
        slope: dec(slope),
        through: Point::new(x0, y0),
        x_intercept: dec(&intercept),
        segment: [at(window[0]), at(window[1])],
    }
}

fn curve(p: &Polynomial, window: [f64; 2]) -> Vec<[f64; 2]> {
    (0..SAMPLES)
        .map(|i| {
            let x = window[0] + (window[1] - window[0]) * i as f64 / (SAMPLES - 1) as f64;
            let y = p
                .coeffs()
                .iter()
                .rev()
                .fold(0.0, |acc, c| acc * x + to_f64(c));
            [x, y]
        })
        .collect()
}

fn window(x: &Interval) -> [f64; 2] {
    let (lo, hi) = (to_f64(x.lo()), to_f64(x.hi()));
    let pad = 0.1 * (hi - lo);
    [lo - pad, hi + pad]
}

/// Exact (rational) plot data for `which`.
pub fn figure_data(which: Figure) -> FigureData {
    let mode = NumericMode::Exact;
    match which {
        Figure::Fig1 => {
            let f = BracketedFunction::check(
                Polynomial::from_ints(&[-4, 0, 1]),
                Interval::new(Rational::from(1), Rational::from(4)).unwrap(),
            )
            .unwrap();
            let x = f.domain().clone();
            let w = window(&x);
            let m = x.midpoint();
            let fm = f.eval(&m);
            let d = f.derivative_range(&x, mode);
            let n = newton_operator(&f, &x, &m, mode).expect("derivative excludes zero");
            FigureData {
                figure: which,
                title: "Moore-Newton step: slope lines through (md X, f(md X))".into(),
                function: f.poly().to_string(),
                domain: x.clone(),
                zero: "2".into(),
                window: w,
                curve: curve(f.poly(), w),
                lines: vec![
                    slope_line("slope F'(X).lo at md(X)", d.lo(), &m, &fm, w),
                    slope_line("slope F'(X).hi at md(X)", d.hi(), &m, &fm, w),
                ],
                candidates: vec![
                    NamedInterval {
                        label: "N(X)".into(),
                        interval: n.clone(),
                    },
                    NamedInterval {
                        label: "N(X) ∩ X".into(),
                        interval: n.intersect(&x).expect("zero is enclosed"),
                    },
                ],
                t: None,
                c: None,
            }
        }
        Figure::Fig2 => {
            let ex = Example::Example1;
            let f = ex.function();
            let x = f.domain().clone();
            let w = window(&x);
            let zero = ex.zero();
            let ctx = StepContext::new(&f).with_mode(mode).with_zero(&zero);
            let rec = kinglike_step(&ctx, 0, &x, &ex.beta()).expect("step completes");
            let m = x.midpoint();
            let fm = f.eval(&m);
            let y = rec.y().expect("Y is nonempty").clone();
            let my = y.midpoint();
            let fy = f.eval(&my);
            let d = &rec.derivative;
            let t = rec.t.as_ref().expect("t is defined").lo().clone();
            let c = rec.c.as_ref().expect("c is defined").lo().clone();
            let shifted = [Rational::from(&c * d.lo()), Rational::from(&c * d.hi())];
            let king = rec.stages[1].candidate.clone();
            FigureData {
                figure: which,
                title: "Ostrowski-like step: shifted slope lines through (md Y, f(md Y))".into(),
                function: f.poly().to_string(),
                domain: x.clone(),
                zero: dec(&zero),
                window: w,
                curve: curve(f.poly(), w),
                lines: vec![
                    slope_line("slope F'(X).lo at md(X)", d.lo(), &m, &fm, w),
                    slope_line("slope F'(X).hi at md(X)", d.hi(), &m, &fm, w),
                    slope_line("slope c F'(X).lo at md(Y)", &shifted[0], &my, &fy, w),
                    slope_line("slope c F'(X).hi at md(Y)", &shifted[1], &my, &fy, w),
                ],
                candidates: vec![
                    NamedInterval {
                        label: "N(X)".into(),
                        interval: rec.stages[0].candidate.clone(),
                    },
                    NamedInterval {
                        label: "Y = N(X) ∩ X".into(),
                        interval: y,
                    },
                    NamedInterval {
                        label: "K(X,Y)".into(),
                        interval: king,
                    },
                ],
                t: Some(dec(&t)),
                c: Some(dec(&c)),
            }
        }
    }
}

impl FigureData {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("figure serializes")
    }

    /// `series,x,y` rows: the curve, then two points per line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("series,x,y\n");
        for [x, y] in &self.curve {
            let _ = writeln!(out, "curve,{x},{y}");
        }
        for l in &self.lines {
            for [x, y] in &l.segment {
                let _ = writeln!(out, "\"{}\",{x},{y}", l.label);
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{}\nf(x) = {}, X = {}, zero {}",
            self.title, self.function, self.domain, self.zero
        );
        for l in &self.lines {
            let _ = writeln!(
                out,
                "  {:<28} slope {:<14} through ({}, {}) crosses zero at {}",
                l.label, l.slope, l.through.x, l.through.y, l.x_intercept
            );
        }
        for c in &self.candidates {
            let _ = writeln!(out, "  {:<14} {}", c.label, c.interval);
        }
        if let (Some(t), Some(c)) = (&self.t, &self.c) {
            let _ = writeln!(out, "  t = {t}, c = {c}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::parse_scalar;

    #[test]
    fn fig1_lines_and_candidate() {
        let d = figure_data(Figure::Fig1);
        assert_eq!(d.lines[0].slope, "2");
        assert_eq!(d.lines[1].slope, "8");
        assert_eq!(d.lines[0].through.x, "2.5");
        assert_eq!(d.lines[0].through.y, "2.25");
        assert_eq!(d.lines[0].x_intercept, "1.375");
        assert_eq!(d.lines[1].x_intercept, "2.21875");
        assert_eq!(
            d.candidates[0].interval,
            "[1.375, 2.21875]".parse().unwrap()
        );
        assert_eq!(d.curve.len(), SAMPLES);
    }

    #[test]
    fn fig2_shifted_lines_meet_axis_at_king_endpoints() {
        let d = figure_data(Figure::Fig2);
        let k = &d.candidates[2].interval;
        assert!(!k.contains(&Rational::from(2)));
        let crossings: Vec<Scalar> = d.lines[2..]
            .iter()
            .map(|l| parse_scalar(&l.x_intercept).unwrap())
            .collect();
        let tol = parse_scalar("1e-11").unwrap();
        let near = |a: &Scalar, b: &Scalar| Rational::from(a - b).abs() <= tol;
        assert!(near(&crossings[0], k.hi()) && near(&crossings[1], k.lo()));
        let t = parse_scalar(d.t.as_ref().unwrap()).unwrap();
        let c = parse_scalar(d.c.as_ref().unwrap()).unwrap();
        assert!(near(&c, &(Rational::from(1) - Rational::from(2) * t)));
    }
}
