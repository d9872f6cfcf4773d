//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.
//!
//! Pass criterion numbers as arguments to run a subset:
//! `cargo test --test acceptance -- 1 2 7`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Rational;

use enclab::lab::examples::Example;
use enclab::lab::orders::OrderMethod;
use enclab::lab::{self, CocConfig, StudyConfig, StudyReport};
use enclab::{
    parse_scalar, run_enclosure, Interval, Method, NumericMode, Polynomial, RunConfig, Scalar,
};

const SEED: u64 = 20_240_601;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn q(s: &str) -> Scalar {
    parse_scalar(s).unwrap()
}

fn example(which: Example) -> Verdict {
    let r = lab::reproduce_example(which, NumericMode::Exact);
    let failed: Vec<String> = r
        .checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("{} expected {} got {}", c.quantity, c.expected, c.computed))
        .collect();
    let k: Vec<&str> = r
        .checks
        .iter()
        .filter(|c| c.quantity.starts_with("K("))
        .map(|c| c.computed.as_str())
        .collect();
    let detail = if failed.is_empty() {
        format!(
            "{} checks, K = [{}], contrast: {}",
            r.checks.len(),
            k.join(", "),
            r.contrast.outcome.label()
        )
    } else {
        failed.join("; ")
    };
    verdict(r.pass, detail)
}

/// Random sub-bracket `[a, b]` of `bracket` with `a < zero < b` and
/// endpoints on a 1/1024 grid of each side.
fn sub_bracket(rng: &mut ChaCha8Rng, bracket: &Interval, zero: &Scalar) -> Interval {
    let i = rng.gen_range(0..1024u32);
    let j = rng.gen_range(1..=1024u32);
    let a = zero.clone() - Rational::from(zero - bracket.lo()) * Rational::from((1024 - i, 1024));
    let b = zero.clone() + Rational::from(bracket.hi() - zero) * Rational::from((j, 1024));
    Interval::new(a, b).unwrap()
}

fn criterion3() -> Verdict {
    let corpus = lab::coc_corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut cases: Vec<(usize, Interval)> = corpus
        .iter()
        .enumerate()
        .map(|(i, e)| (i, e.bracket.clone()))
        .collect();
    while cases.len() < corpus.len() + 500 {
        let i = cases.len() % corpus.len();
        let e = &corpus[i];
        let x = sub_bracket(&mut rng, &e.bracket, &e.zero);
        if enclab::BracketedFunction::check(e.function.poly().clone(), x.clone()).is_ok() {
            cases.push((i, x));
        }
    }
    let exact = RunConfig {
        mode: NumericMode::Exact,
        tol: q("1e-50"),
        max_iter: 4,
    };
    let float = RunConfig {
        mode: NumericMode::float(100),
        tol: q("1e-50"),
        max_iter: 12,
    };
    let mut steps = 0;
    let mut violations = Vec::new();
    let mut not_converged = 0;
    for (i, x) in &cases {
        let e = &corpus[*i];
        let f = enclab::BracketedFunction::check(e.function.poly().clone(), x.clone()).unwrap();
        for cfg in [&exact, &float] {
            let trace = run_enclosure(&Method::MooreNewton, &f, x, cfg, Some(&e.zero));
            for s in &trace.steps {
                steps += 1;
                let next = s.x_next.as_ref();
                let nested = next.is_some_and(|n| n.is_subset(&s.x));
                if !(nested && s.sign_change_ok && s.known_zero_inside == Some(true)) {
                    violations.push(format!("{} on {} k={}", e.label, x, s.k));
                }
            }
            if cfg.mode != NumericMode::Exact && trace.outcome != enclab::Outcome::Converged {
                not_converged += 1;
            }
        }
    }
    let pass = violations.is_empty() && not_converged == 0;
    let mut detail = format!(
        "{} brackets ({} random), {} audited steps, {} violations, {} float runs short of 1e-50 in 12 steps",
        cases.len(),
        cases.len() - corpus.len(),
        steps,
        violations.len(),
        not_converged
    );
    if let Some(v) = violations.first() {
        detail += &format!("; first: {v}");
    }
    verdict(pass, detail)
}

fn run_full_study(threads: usize) -> (StudyReport, Duration) {
    let cfg = StudyConfig::full(SEED);
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap();
    let report = pool
        .install(|| lab::failure_rate_study(&cfg))
        .expect("valid configuration");
    (report, start.elapsed())
}

fn criterion4(report: &StudyReport, elapsed: Duration) -> Verdict {
    let pcts: Vec<f64> = report
        .experiments
        .iter()
        .map(|s| s.failure_percent)
        .collect();
    let a = &report.aggregate;
    let in_band = pcts.iter().all(|p| (45.0..=75.0).contains(p));
    let mean_ok = (50.0..=70.0).contains(&a.mean_percent);
    let lost: usize = report.experiments.iter().map(|s| s.inclusion_lost).sum();
    let empty: usize = report
        .experiments
        .iter()
        .map(|s| s.empty_intersection)
        .sum();
    verdict(
        in_band && mean_ok,
        format!(
            "per-experiment {:.1}..{:.1}% (band 45..75: {}), mean {:.2}% (band 50..70: {}); {} lost + {} empty of {} trials, {} redraws, {:.1?}",
            a.min_percent,
            a.max_percent,
            if in_band { "ok" } else { "out" },
            a.mean_percent,
            if mean_ok { "ok" } else { "out" },
            lost,
            empty,
            a.trials,
            a.redraws,
            elapsed
        ),
    )
}

fn criterion5(report: &lab::CocReport) -> Verdict {
    let s = report.summary(OrderMethod::KingLike);
    let worst = report
        .cells
        .iter()
        .filter(|c| c.method == OrderMethod::KingLike)
        .filter_map(|c| c.measurement.as_ref())
        .map(|m| m.r_c)
        .fold(f64::NEG_INFINITY, f64::max);
    let median = s.median.unwrap_or(f64::NAN);
    let pass = s.valid > 0 && (3.4..=3.6).contains(&median) && worst < 3.9;
    verdict(
        pass,
        format!(
            "{} valid cells, {} failed runs excluded, {} above smallness; median r_c {:.4}, max {:.4}",
            s.valid, s.failed_runs, s.not_small, median, worst
        ),
    )
}

fn criterion6(report: &lab::CocReport) -> Verdict {
    let bands = [
        (OrderMethod::ScalarKing, 3.9, 4.1),
        (OrderMethod::ScalarUncorrected, 2.9, 3.1),
        (OrderMethod::ScalarNewton, 1.9, 2.1),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (m, lo, hi) in bands {
        let s = report.summary(m);
        let (min, max) = (s.min.unwrap_or(f64::NAN), s.max.unwrap_or(f64::NAN));
        let ok = s.valid > 0 && s.failed_runs == 0 && min >= lo && max <= hi;
        pass &= ok;
        parts.push(format!(
            "{} {:.4}..{:.4} over {} cells",
            m.name(),
            min,
            max,
            s.valid
        ));
    }
    verdict(pass, parts.join(", "))
}

fn criterion7() -> Verdict {
    let c = Rational::from((3, 7));
    let mut worst: f64 = 0.0;
    for p in [2u32, 3, 4] {
        for k_max in 3..=5u32 {
            let radii: Vec<Scalar> = (0..=k_max)
                .map(|k| &c * enclab::interval::pow10(-(i64::from(p.pow(k)))))
                .collect();
            let m = lab::computational_order(&radii, &Rational::from(1)).unwrap();
            worst = worst.max((m.r_c - f64::from(p)).abs());
        }
    }
    verdict(
        worst < 1e-6,
        format!("max |r_c - p| = {worst:.2e} over p in {{2, 3, 4}}"),
    )
}

fn criterion8() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    let rand_q = |rng: &mut ChaCha8Rng| {
        Rational::from((rng.gen_range(-1000i64..=1000), rng.gen_range(1i64..=64)))
    };
    let rand_interval = |rng: &mut ChaCha8Rng| {
        let (a, b) = (rand_q(rng), rand_q(rng));
        if a <= b {
            Interval::new(a, b).unwrap()
        } else {
            Interval::new(b, a).unwrap()
        }
    };
    let inside = |rng: &mut ChaCha8Rng, x: &Interval| {
        let u = Rational::from((rng.gen_range(0..=256u32), 256));
        x.lo() + u * x.width()
    };
    let modes = [NumericMode::Exact, NumericMode::float(5)];
    let (mut checks, mut violations, mut restriction_failures) = (0u64, 0u64, 0u64);
    while checks < 100_000 {
        let (x, y) = (rand_interval(&mut rng), rand_interval(&mut rng));
        let (a, b) = (inside(&mut rng, &x), inside(&mut rng, &y));
        let degree = rng.gen_range(0..=5);
        let p = Polynomial::new((0..=degree).map(|_| rand_q(&mut rng)).collect());
        for mode in modes {
            let results = [
                (x.add(&y, mode), Rational::from(&a + &b)),
                (x.sub(&y, mode), Rational::from(&a - &b)),
                (x.mul(&y, mode), Rational::from(&a * &b)),
                (p.eval_interval(&x, mode), p.eval(&a)),
            ];
            for (enclosure, value) in results {
                checks += 1;
                violations += u64::from(!enclosure.contains(&value));
            }
            if !y.contains_zero() {
                checks += 1;
                let ok = x
                    .div(&y, mode)
                    .is_ok_and(|z| z.contains(&Rational::from(&a / &b)));
                violations += u64::from(!ok);
            }
        }
        let (pa, pb) = (Interval::point(a.clone()), Interval::point(b.clone()));
        let exact = NumericMode::Exact;
        let restricted = p.eval_interval(&pa, exact) == Interval::point(p.eval(&a))
            && pa.add(&pb, exact) == Interval::point(Rational::from(&a + &b))
            && pa.mul(&pb, exact) == Interval::point(Rational::from(&a * &b));
        restriction_failures += u64::from(!restricted);
    }
    verdict(
        violations == 0 && restriction_failures == 0,
        format!("{checks} containment checks, {violations} violations; {restriction_failures} restriction failures"),
    )
}

fn main() -> ExitCode {
    let selected: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let wants = |n: u32| selected.is_empty() || selected.contains(&n);
    let mut failures = 0;
    let mut report = |n: u32, name: &str, start: Instant, v: Verdict| {
        println!(
            "criterion {n} [{name}]: {} ({:.1?}) {}",
            if v.pass { "PASS" } else { "FAIL" },
            start.elapsed(),
            v.detail
        );
        if !v.pass {
            failures += 1;
        }
    };
    println!("acceptance criteria");

    if wants(1) {
        let t = Instant::now();
        report(1, "example 1 regression", t, example(Example::Example1));
    }
    if wants(2) {
        let t = Instant::now();
        report(2, "example 2 regression", t, example(Example::Example2));
    }
    if wants(3) {
        let t = Instant::now();
        report(3, "moore-newton inclusion", t, criterion3());
    }
    if wants(4) || wants(9) {
        let t = Instant::now();
        let (parallel, elapsed) = run_full_study(4);
        if wants(4) {
            report(4, "failure-rate study", t, criterion4(&parallel, elapsed));
        }
        if wants(9) {
            let t = Instant::now();
            let (sequential, _) = run_full_study(1);
            let (a, b) = (parallel.to_json(), sequential.to_json());
            let same = a == b && parallel.to_csv() == sequential.to_csv();
            report(
                9,
                "determinism",
                t,
                verdict(
                    same,
                    format!(
                        "4-thread and 1-thread reports: {} JSON bytes, identical: {same}",
                        a.len()
                    ),
                ),
            );
        }
    }
    if wants(5) || wants(6) {
        let t = Instant::now();
        let coc = lab::coc_study(&lab::coc_corpus(), &CocConfig::default());
        if wants(5) {
            report(5, "king-like convergence order", t, criterion5(&coc));
        }
        if wants(6) {
            report(6, "scalar convergence orders", t, criterion6(&coc));
        }
    }
    if wants(7) {
        let t = Instant::now();
        report(7, "order estimator oracle", t, criterion7());
    }
    if wants(8) {
        let t = Instant::now();
        report(8, "interval soundness", t, criterion8());
    }

    if failures == 0 {
        println!("all selected criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("{failures} criterion(s) failed");
        ExitCode::FAILURE
    }
}
