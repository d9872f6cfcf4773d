//! Randomized failure-rate study of the King-like interval method.
//!
//! Each trial draws `a_0..a_5` uniformly from `(0, 1)` as 53-bit dyadic
//! rationals, forms
//!
//! ```text
//! P(x) = (x - 1)(x^6 + a_5 x^5 + a_4 x^4 + a_3 x^3 + a_2 x^2 + a_1 x + a_0)
//! ```
//!
//! and runs the King-like method for every `beta` of the grid from `X0`
//! with reference zero 1. A draw that is not bracketed on `X0` (no verified
//! monotonicity, or no sign change) is replaced by the next draw of the same
//! stream; the number of replacements is reported.
//!
//! Every polynomial slot `(experiment, polynomial)` owns a ChaCha stream
//! keyed by the master seed, so results do not depend on scheduling.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rug::{Integer, Rational};
use serde::Serialize;

use crate::enclosure::{run_enclosure, Method, Outcome, RunConfig, Stage};
use crate::error::{Error, Result};
use crate::interval::{
    format_scalar, parse_scalar, pow10, Interval, NumericMode, Rounding, Scalar,
};
use crate::par;
use crate::poly::{BracketedFunction, Polynomial};

const COEFF_BITS: u32 = 53;
/// Upper bound on replacement draws for one polynomial slot.
pub const MAX_REDRAWS: usize = 10_000;

#[derive(Clone, Debug, Serialize)]
pub struct StudyConfig {
    pub n_experiments: usize,
    pub n_polynomials: usize,
    #[serde(serialize_with = "crate::lab::ser_scalars")]
    pub beta_grid: Vec<Scalar>,
    pub x0: Interval,
    pub master_seed: u64,
    pub mode: NumericMode,
    #[serde(serialize_with = "crate::lab::ser_scalar")]
    pub tol: Scalar,
    pub max_iter: usize,
}

/// `-2 + 0.5 m` for `m = 0..9`.
pub fn default_beta_grid() -> Vec<Scalar> {
    (0..10)
        .map(|m| Rational::from(-2) + Rational::from((m, 2)))
        .collect()
}

impl StudyConfig {
    /// 20 experiments of 100 polynomials.
    pub fn full(master_seed: u64) -> Self {
        StudyConfig {
            n_experiments: 20,
            n_polynomials: 100,
            beta_grid: default_beta_grid(),
            x0: Interval::new(parse_scalar("0.6").unwrap(), Rational::from(3)).unwrap(),
            master_seed,
            mode: NumericMode::float(NumericMode::DEFAULT_FLOAT_DIGITS),
            tol: pow10(-100),
            max_iter: 12,
        }
    }

    /// 2 experiments of 20 polynomials.
    pub fn smoke(master_seed: u64) -> Self {
        StudyConfig {
            n_experiments: 2,
            n_polynomials: 20,
            ..Self::full(master_seed)
        }
    }

    pub fn trials_per_experiment(&self) -> usize {
        self.n_polynomials * self.beta_grid.len()
    }

    pub fn run_config(&self) -> RunConfig {
        RunConfig {
            mode: self.mode,
            tol: self.tol.clone(),
            max_iter: self.max_iter,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::ConfigInvalid(m.to_string()));
        if self.n_experiments == 0 {
            return bad("at least one experiment is required");
        }
        if self.n_polynomials == 0 {
            return bad("at least one polynomial per experiment is required");
        }
        if self.beta_grid.is_empty() {
            return bad("beta grid is empty");
        }
        if !self.x0.contains(&Rational::from(1)) {
            return bad("X0 must contain the zero x = 1");
        }
        if self.max_iter == 0 {
            return bad("max_iter must be positive");
        }
        if self.tol.cmp0() == std::cmp::Ordering::Less {
            return bad("tol must be nonnegative");
        }
        Ok(())
    }
}

fn stream(cfg: &StudyConfig, experiment: usize, polynomial: usize) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.master_seed);
    rng.set_stream(((experiment as u64) << 32) | polynomial as u64);
    rng
}

/// `(x - 1)(x^6 + a_5 x^5 + ... + a_0)` from `a = [a_0, ..., a_5]`.
pub fn study_polynomial(a: &[Scalar]) -> Polynomial {
    let mut sextic = a.to_vec();
    sextic.push(Rational::from(1));
    Polynomial::new(sextic).mul(&Polynomial::from_ints(&[-1, 1]))
}

fn draw_coefficients(rng: &mut ChaCha12Rng) -> Vec<Scalar> {
    let scale = Integer::from(1) << COEFF_BITS;
    (0..6)
        .map(|_| {
            Rational::from((
                Integer::from(rng.gen_range(1u64..1 << COEFF_BITS)),
                scale.clone(),
            ))
        })
        .collect()
}

/// One polynomial slot after replacement draws.
struct Draw {
    coefficients: Vec<Scalar>,
    function: BracketedFunction,
    redraws: usize,
}

fn draw(cfg: &StudyConfig, experiment: usize, polynomial: usize) -> Result<Draw> {
    let mut rng = stream(cfg, experiment, polynomial);
    for redraws in 0..=MAX_REDRAWS {
        let coefficients = draw_coefficients(&mut rng);
        if let Ok(function) =
            BracketedFunction::check(study_polynomial(&coefficients), cfg.x0.clone())
        {
            return Ok(Draw {
                coefficients,
                function,
                redraws,
            });
        }
    }
    Err(Error::ConfigInvalid(format!(
        "no bracketed polynomial on {} after {MAX_REDRAWS} redraws",
        cfg.x0
    )))
}

/// Outcome of one `(polynomial, beta)` trial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub experiment: usize,
    pub polynomial: usize,
    pub beta_index: usize,
    pub outcome: Outcome,
}

/// A failing trial, replayable with [`replay_witness`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub experiment: usize,
    pub polynomial: usize,
    /// `a_0..a_5` as exact fractions.
    #[serde(serialize_with = "ser_fractions")]
    pub coefficients: Vec<Scalar>,
    #[serde(serialize_with = "crate::lab::ser_scalar")]
    pub beta: Scalar,
    pub outcome: Outcome,
}

fn ser_fractions<S: serde::Serializer>(v: &[Scalar], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentSummary {
    pub experiment: usize,
    pub trials: usize,
    pub failures: usize,
    pub failure_percent: f64,
    pub inclusion_lost: usize,
    pub empty_intersection: usize,
    pub redraws: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BetaSummary {
    #[serde(serialize_with = "crate::lab::ser_scalar")]
    pub beta: Scalar,
    pub trials: usize,
    pub failures: usize,
    pub failure_percent: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Aggregate {
    pub min_percent: f64,
    pub max_percent: f64,
    pub mean_percent: f64,
    pub trials: usize,
    pub failures: usize,
    pub redraws: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct StudyReport {
    pub config: StudyConfig,
    pub experiments: Vec<ExperimentSummary>,
    pub aggregate: Aggregate,
    pub per_beta: Vec<BetaSummary>,
    /// Outcome label (with iteration and stage for failures) to count.
    pub outcomes: BTreeMap<String, usize>,
    pub witnesses: Vec<Witness>,
    #[serde(skip)]
    pub trials: Vec<TrialRecord>,
}

fn percent(failures: usize, trials: usize) -> f64 {
    100.0 * failures as f64 / trials as f64
}

fn outcome_key(o: &Outcome) -> String {
    let stage = |s: &Stage| {
        serde_json::to_value(s)
            .unwrap()
            .as_str()
            .unwrap()
            .to_string()
    };
    match o {
        Outcome::InclusionLost { k, stage: s } | Outcome::EmptyIntersection { k, stage: s } => {
            format!("{}@k={k}:{}", o.label(), stage(s))
        }
        Outcome::DegenerateFactor { k }
        | Outcome::DerivativeStraddlesZero { k }
        | Outcome::PrecisionLimit { k } => {
            format!("{}@k={k}", o.label())
        }
        _ => o.label().to_string(),
    }
}

struct SlotResult {
    coefficients: Vec<Scalar>,
    redraws: usize,
    outcomes: Vec<Outcome>,
}

fn run_slot(
    cfg: &StudyConfig,
    run: &RunConfig,
    experiment: usize,
    polynomial: usize,
) -> Result<SlotResult> {
    let d = draw(cfg, experiment, polynomial)?;
    let one = Rational::from(1);
    let outcomes = cfg
        .beta_grid
        .iter()
        .map(|beta| {
            let method = Method::KingLike { beta: beta.clone() };
            run_enclosure(&method, &d.function, &cfg.x0, run, Some(&one)).outcome
        })
        .collect();
    Ok(SlotResult {
        coefficients: d.coefficients,
        redraws: d.redraws,
        outcomes,
    })
}

/// Runs the study on the rayon pool (or sequentially without the
/// `parallel` feature).
pub fn failure_rate_study(cfg: &StudyConfig) -> Result<StudyReport> {
    study_with(cfg, true)
}

/// Same study, always on the calling thread.
pub fn failure_rate_study_sequential(cfg: &StudyConfig) -> Result<StudyReport> {
    study_with(cfg, false)
}

fn study_with(cfg: &StudyConfig, parallel: bool) -> Result<StudyReport> {
    cfg.validate()?;
    let run = cfg.run_config();
    let slots: Vec<(usize, usize)> = (0..cfg.n_experiments)
        .flat_map(|e| (0..cfg.n_polynomials).map(move |p| (e, p)))
        .collect();
    let job = |&(e, p): &(usize, usize)| run_slot(cfg, &run, e, p);
    let results = if parallel {
        par::map(&slots, job)
    } else {
        par::map_sequential(&slots, job)
    };

    let mut experiments: Vec<ExperimentSummary> = (0..cfg.n_experiments)
        .map(|e| ExperimentSummary {
            experiment: e,
            trials: cfg.trials_per_experiment(),
            failures: 0,
            failure_percent: 0.0,
            inclusion_lost: 0,
            empty_intersection: 0,
            redraws: 0,
        })
        .collect();
    let mut beta_failures = vec![0usize; cfg.beta_grid.len()];
    let mut outcomes = BTreeMap::new();
    let mut witnesses = Vec::new();
    let mut trials = Vec::with_capacity(slots.len() * cfg.beta_grid.len());
    for (&(e, p), slot) in slots.iter().zip(results) {
        let slot = slot?;
        let summary = &mut experiments[e];
        summary.redraws += slot.redraws;
        for (b, outcome) in slot.outcomes.into_iter().enumerate() {
            *outcomes.entry(outcome_key(&outcome)).or_insert(0) += 1;
            match outcome {
                Outcome::InclusionLost { .. } => summary.inclusion_lost += 1,
                Outcome::EmptyIntersection { .. } => summary.empty_intersection += 1,
                _ => {}
            }
            if outcome.is_inclusion_failure() {
                summary.failures += 1;
                beta_failures[b] += 1;
                witnesses.push(Witness {
                    experiment: e,
                    polynomial: p,
                    coefficients: slot.coefficients.clone(),
                    beta: cfg.beta_grid[b].clone(),
                    outcome: outcome.clone(),
                });
            }
            trials.push(TrialRecord {
                experiment: e,
                polynomial: p,
                beta_index: b,
                outcome,
            });
        }
    }
    for s in &mut experiments {
        s.failure_percent = percent(s.failures, s.trials);
    }
    let pcts: Vec<f64> = experiments.iter().map(|s| s.failure_percent).collect();
    let failures: usize = experiments.iter().map(|s| s.failures).sum();
    let aggregate = Aggregate {
        min_percent: pcts.iter().copied().fold(f64::INFINITY, f64::min),
        max_percent: pcts.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        mean_percent: pcts.iter().sum::<f64>() / pcts.len() as f64,
        trials: cfg.n_experiments * cfg.trials_per_experiment(),
        failures,
        redraws: experiments.iter().map(|s| s.redraws).sum(),
    };
    let per_beta_trials = cfg.n_experiments * cfg.n_polynomials;
    let per_beta = cfg
        .beta_grid
        .iter()
        .zip(beta_failures)
        .map(|(beta, f)| BetaSummary {
            beta: beta.clone(),
            trials: per_beta_trials,
            failures: f,
            failure_percent: percent(f, per_beta_trials),
        })
        .collect();
    Ok(StudyReport {
        config: cfg.clone(),
        experiments,
        aggregate,
        per_beta,
        outcomes,
        witnesses,
        trials,
    })
}

/// Re-runs one witness under `cfg`'s `X0`, mode, tolerance and iteration
/// cap.
pub fn replay_witness(w: &Witness, cfg: &StudyConfig) -> Result<Outcome> {
    let f = BracketedFunction::check(study_polynomial(&w.coefficients), cfg.x0.clone())?;
    let method = Method::KingLike {
        beta: w.beta.clone(),
    };
    Ok(run_enclosure(
        &method,
        &f,
        &cfg.x0,
        &cfg.run_config(),
        Some(&Rational::from(1)),
    )
    .outcome)
}

impl StudyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per trial.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("experiment,polynomial,beta,outcome,k,stage\n");
        for t in &self.trials {
            let (k, stage) = match &t.outcome {
                Outcome::InclusionLost { k, stage } | Outcome::EmptyIntersection { k, stage } => (
                    k.to_string(),
                    serde_json::to_value(stage)
                        .unwrap()
                        .as_str()
                        .unwrap()
                        .to_string(),
                ),
                Outcome::DegenerateFactor { k }
                | Outcome::DerivativeStraddlesZero { k }
                | Outcome::PrecisionLimit { k } => (k.to_string(), String::new()),
                _ => (String::new(), String::new()),
            };
            let beta = format_scalar(&self.config.beta_grid[t.beta_index], 12, Rounding::Nearest);
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                t.experiment,
                t.polynomial,
                beta,
                t.outcome.label(),
                k,
                stage
            );
        }
        out
    }

    pub fn to_text(&self) -> String {
        let c = &self.config;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "failure-rate study: {} experiments x {} polynomials x {} beta, seed {}, X0 = {}, {}",
            c.n_experiments,
            c.n_polynomials,
            c.beta_grid.len(),
            c.master_seed,
            c.x0,
            mode_label(c.mode)
        );
        let _ = writeln!(
            out,
            "\nexperiment  failures  trials  percent  lost  empty  redraws"
        );
        for s in &self.experiments {
            let _ = writeln!(
                out,
                "{:>10}  {:>8}  {:>6}  {:>7.1}  {:>4}  {:>5}  {:>7}",
                s.experiment,
                s.failures,
                s.trials,
                s.failure_percent,
                s.inclusion_lost,
                s.empty_intersection,
                s.redraws
            );
        }
        let a = &self.aggregate;
        let _ = writeln!(
            out,
            "\nfailure percent: min {:.1}  max {:.1}  mean {:.2}  ({} of {} trials, {} redraws)",
            a.min_percent, a.max_percent, a.mean_percent, a.failures, a.trials, a.redraws
        );
        let _ = writeln!(out, "\n      beta  failures  percent");
        for b in &self.per_beta {
            let _ = writeln!(
                out,
                "{:>10}  {:>8}  {:>7.1}",
                format_scalar(&b.beta, 6, Rounding::Nearest),
                b.failures,
                b.failure_percent
            );
        }
        let _ = writeln!(out, "\noutcomes:");
        for (k, v) in &self.outcomes {
            let _ = writeln!(out, "  {k}: {v}");
        }
        out
    }
}

pub(crate) fn mode_label(mode: NumericMode) -> String {
    match mode {
        NumericMode::Exact => "exact".into(),
        NumericMode::Float { digits } => format!("float ({digits} digits)"),
    }
}
