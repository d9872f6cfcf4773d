//! Convergence-order study over the corpus.
//!
//! Interval methods are measured on semi-widths, scalar methods on
//! `|x_k - x*|`. King-like runs that stop with anything other than a
//! completed iteration count (inclusion loss, empty intersection, degenerate
//! factor, ...) are excluded and counted.

use std::fmt::Write as _;

use rug::Rational;
use serde::Serialize;

use crate::enclosure::{run_enclosure, Method, Outcome, RunConfig};
use crate::interval::{format_scalar, pow10, NumericMode, Rounding, Scalar};
use crate::lab::coc::{above_floor, computational_order, CocMeasurement};
use crate::lab::corpus::CorpusEntry;
use crate::lab::study::{default_beta_grid, mode_label};
use crate::par;
use crate::point::{iterate_scalar, StepRule};

#[derive(Clone, Debug, Serialize)]
pub struct CocConfig {
    #[serde(serialize_with = "crate::lab::ser_scalars")]
    pub beta_grid: Vec<Scalar>,
    pub mode: NumericMode,
    #[serde(serialize_with = "crate::lab::ser_scalar")]
    pub smallness: Scalar,
    /// Iterations of the King-like method per cell.
    pub king_iterations: usize,
    /// Moore–Newton converges more slowly and needs more steps to get its
    /// radii below `smallness`.
    pub newton_iterations: usize,
    pub scalar_max_iter: usize,
}

impl Default for CocConfig {
    fn default() -> Self {
        CocConfig {
            beta_grid: default_beta_grid(),
            mode: NumericMode::float(NumericMode::DEFAULT_FLOAT_DIGITS),
            smallness: pow10(-20),
            king_iterations: 5,
            newton_iterations: 10,
            scalar_max_iter: 12,
        }
    }
}

impl CocConfig {
    /// Magnitudes at or below this are rounding noise: `10^(-0.9 digits)`
    /// in float mode, zero in exact mode.
    pub fn noise_floor(&self) -> Scalar {
        match self.mode {
            NumericMode::Exact => Rational::new(),
            NumericMode::Float { digits } => pow10(-(i64::from(digits) * 9 / 10)),
        }
    }
}

/// Method measured in one cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderMethod {
    KingLike,
    MooreNewton,
    ScalarKing,
    ScalarUncorrected,
    ScalarNewton,
}

impl OrderMethod {
    pub const ALL: [OrderMethod; 5] = [
        OrderMethod::KingLike,
        OrderMethod::MooreNewton,
        OrderMethod::ScalarKing,
        OrderMethod::ScalarUncorrected,
        OrderMethod::ScalarNewton,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OrderMethod::KingLike => "king-like",
            OrderMethod::MooreNewton => "moore-newton",
            OrderMethod::ScalarKing => "scalar-king",
            OrderMethod::ScalarUncorrected => "scalar-uncorrected",
            OrderMethod::ScalarNewton => "scalar-newton",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CocCell {
    pub function: usize,
    pub method: OrderMethod,
    #[serde(serialize_with = "crate::lab::ser_opt_scalar")]
    pub beta: Option<Scalar>,
    /// Run outcome label for interval methods, `ok` or the error for scalar
    /// ones.
    pub outcome: String,
    pub measurement: Option<CocMeasurement>,
    /// Why no usable measurement exists.
    pub excluded: Option<String>,
}

impl CocCell {
    /// Measured and with radii small enough to trust.
    pub fn is_valid(&self) -> bool {
        self.measurement.as_ref().is_some_and(|m| m.valid)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MethodSummary {
    pub method: OrderMethod,
    pub cells: usize,
    /// Cells whose run stopped without completing (inclusion lost, ...).
    pub failed_runs: usize,
    /// Cells with a measurement but radii above `smallness`.
    pub not_small: usize,
    pub valid: usize,
    pub median: Option<f64>,
    pub min: Option<f64>,
    pub max: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CocReport {
    pub config: CocConfig,
    pub corpus: Vec<CorpusEntry>,
    pub summaries: Vec<MethodSummary>,
    pub cells: Vec<CocCell>,
}

fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    })
}

enum Job {
    Interval(Method),
    Scalar(StepRule),
}

fn measure(seq: Vec<Scalar>, cfg: &CocConfig) -> (Option<CocMeasurement>, Option<String>) {
    match computational_order(&above_floor(seq, &cfg.noise_floor()), &cfg.smallness) {
        Ok(m) => (Some(m), None),
        Err(e) => (None, Some(e.to_string())),
    }
}

fn run_cell(
    entry: &CorpusEntry,
    job: &Job,
    cfg: &CocConfig,
) -> (String, Option<CocMeasurement>, Option<String>) {
    let f = &entry.function;
    match job {
        Job::Interval(method) => {
            let iterations = match method {
                Method::MooreNewton => cfg.newton_iterations,
                _ => cfg.king_iterations,
            };
            let run = RunConfig {
                mode: cfg.mode,
                tol: cfg.noise_floor(),
                max_iter: iterations,
            };
            let trace = run_enclosure(method, f, f.domain(), &run, Some(&entry.zero));
            let label = trace.outcome.label().to_string();
            match trace.outcome {
                Outcome::Converged | Outcome::MaxIterations => {
                    let (m, why) = measure(trace.radii(), cfg);
                    (label, m, why)
                }
                _ => (label.clone(), None, Some(format!("run failed: {label}"))),
            }
        }
        Job::Scalar(rule) => {
            let x0 = f.domain().midpoint();
            match iterate_scalar(
                rule,
                f,
                x0,
                &cfg.noise_floor(),
                cfg.scalar_max_iter,
                cfg.mode,
            ) {
                Ok(trace) => {
                    let (m, why) = measure(trace.errors(&entry.zero), cfg);
                    ("ok".into(), m, why)
                }
                Err(e) => (e.to_string(), None, Some(format!("run failed: {e}"))),
            }
        }
    }
}

/// Measures every method on every corpus entry, King variants for every
/// `beta` in the grid.
pub fn coc_study(corpus: &[CorpusEntry], cfg: &CocConfig) -> CocReport {
    let mut jobs: Vec<(usize, OrderMethod, Option<Scalar>)> = Vec::new();
    for i in 0..corpus.len() {
        for beta in &cfg.beta_grid {
            jobs.push((i, OrderMethod::KingLike, Some(beta.clone())));
        }
        jobs.push((i, OrderMethod::MooreNewton, None));
        for beta in &cfg.beta_grid {
            jobs.push((i, OrderMethod::ScalarKing, Some(beta.clone())));
        }
        jobs.push((i, OrderMethod::ScalarUncorrected, None));
        jobs.push((i, OrderMethod::ScalarNewton, None));
    }
    let cells = par::map(&jobs, |(i, method, beta)| {
        let job = match (method, beta) {
            (OrderMethod::KingLike, Some(b)) => Job::Interval(Method::KingLike { beta: b.clone() }),
            (OrderMethod::MooreNewton, _) => Job::Interval(Method::MooreNewton),
            (OrderMethod::ScalarKing, Some(b)) => Job::Scalar(StepRule::King { beta: b.clone() }),
            (OrderMethod::ScalarUncorrected, _) => Job::Scalar(StepRule::Uncorrected),
            _ => Job::Scalar(StepRule::Newton),
        };
        let (outcome, measurement, excluded) = run_cell(&corpus[*i], &job, cfg);
        CocCell {
            function: *i,
            method: *method,
            beta: beta.clone(),
            outcome,
            measurement,
            excluded,
        }
    });
    let summaries = OrderMethod::ALL
        .iter()
        .map(|&method| {
            let mine: Vec<&CocCell> = cells.iter().filter(|c| c.method == method).collect();
            let rates: Vec<f64> = mine
                .iter()
                .filter(|c| c.is_valid())
                .map(|c| c.measurement.as_ref().unwrap().r_c)
                .collect();
            MethodSummary {
                method,
                cells: mine.len(),
                failed_runs: mine.iter().filter(|c| c.measurement.is_none()).count(),
                not_small: mine
                    .iter()
                    .filter(|c| c.measurement.as_ref().is_some_and(|m| !m.valid))
                    .count(),
                valid: rates.len(),
                min: rates.iter().copied().reduce(f64::min),
                max: rates.iter().copied().reduce(f64::max),
                median: median(rates),
            }
        })
        .collect();
    CocReport {
        config: cfg.clone(),
        corpus: corpus.to_vec(),
        summaries,
        cells,
    }
}

impl CocReport {
    pub fn summary(&self, method: OrderMethod) -> &MethodSummary {
        self.summaries
            .iter()
            .find(|s| s.method == method)
            .expect("every method is summarized")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("function,method,beta,outcome,r_c,valid,excluded\n");
        for c in &self.cells {
            let beta = c
                .beta
                .as_ref()
                .map(|b| format_scalar(b, 12, Rounding::Nearest))
                .unwrap_or_default();
            let (rc, valid) = match &c.measurement {
                Some(m) => (format!("{:.6}", m.r_c), m.valid.to_string()),
                None => (String::new(), String::new()),
            };
            let excluded = c.excluded.clone().unwrap_or_default().replace(',', ";");
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                c.function,
                c.method.name(),
                beta,
                c.outcome,
                rc,
                valid,
                excluded
            );
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "convergence order over {} functions, {}, smallness {}",
            self.corpus.len(),
            mode_label(self.config.mode),
            format_scalar(&self.config.smallness, 6, Rounding::Nearest)
        );
        let _ = writeln!(
            out,
            "\nmethod               cells  failed  not-small  valid  median    min       max"
        );
        let f = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.4}"));
        for s in &self.summaries {
            let _ = writeln!(
                out,
                "{:<19}  {:>5}  {:>6}  {:>9}  {:>5}  {:<8}  {:<8}  {:<8}",
                s.method.name(),
                s.cells,
                s.failed_runs,
                s.not_small,
                s.valid,
                f(s.median),
                f(s.min),
                f(s.max)
            );
        }
        out
    }
}
