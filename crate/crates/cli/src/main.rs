//! `enclab`: run interval enclosure methods and the experiments around them.
//!
//! Exit status is 0 whenever the requested computation ran, including when
//! a method loses its zero (that is reported, not raised). Invalid
//! arguments or configurations exit with status 2.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use enclab::lab::examples::Example;
use enclab::lab::{self, CocConfig, Figure, StudyConfig};
use enclab::{
    parse_scalar, run_enclosure, BracketedFunction, Interval, Method, NumericMode, Polynomial,
    RunConfig, Scalar,
};

#[derive(Parser)]
#[command(
    name = "enclab",
    version,
    about = "Interval Newton and King-like enclosure methods with inclusion auditing"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Arithmetic: exact rationals, or outward-rounded binary floats.
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,
    /// Decimal digits in float mode (implies --mode float).
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Stop once the interval radius is at most this.
    #[arg(long, global = true, allow_hyphen_values = true)]
    tol: Option<String>,
    /// Iteration cap (for `coc`: King-like iterations per cell).
    #[arg(long, global = true)]
    max_iter: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    MooreNewton,
    KingLike,
    ThreePoint,
}

#[derive(Subcommand)]
enum Command {
    /// Run one method on one polynomial and print the audited trace.
    Enclose {
        /// Coefficients in ascending degree, comma separated: "-12,0,1,1" is x^3 + x^2 - 12.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        /// Starting interval, e.g. "[0.5, 2.1]".
        #[arg(long, allow_hyphen_values = true)]
        x0: String,
        #[arg(long, value_enum, default_value_t = MethodArg::MooreNewton)]
        method: MethodArg,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        beta: String,
        /// Known zero, enabling the membership witness.
        #[arg(long, allow_hyphen_values = true)]
        zero: Option<String>,
    },
    /// Reproduce one of the two counterexamples (1 or 2).
    Example {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
    },
    /// Randomized failure-rate study of the King-like method.
    Study {
        #[arg(long)]
        experiments: Option<usize>,
        #[arg(long)]
        polys: Option<usize>,
        /// Comma-separated beta values (default -2, -1.5, ..., 2.5).
        #[arg(long, allow_hyphen_values = true)]
        betas: Option<String>,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<String>,
        /// Full protocol: 20 experiments x 100 polynomials.
        #[arg(long)]
        full: bool,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convergence-order study over the built-in corpus.
    Coc {
        #[arg(long, allow_hyphen_values = true)]
        betas: Option<String>,
        /// Radii must be below this for a measurement to count.
        #[arg(long, default_value = "1e-20")]
        smallness: String,
    },
    /// Emit plot data for figure 1 (Moore-Newton) or 2 (failing King-like step). Always exact.
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
    },
}

fn mode(g: &Global, default: NumericMode) -> Result<NumericMode> {
    if g.precision == Some(0) {
        bail!("--precision must be positive");
    }
    Ok(match (g.mode, g.precision) {
        (Some(ModeArg::Exact), Some(_)) => bail!("--precision only applies to --mode float"),
        (Some(ModeArg::Exact), None) => NumericMode::Exact,
        (Some(ModeArg::Float), p) => {
            NumericMode::float(p.unwrap_or(NumericMode::DEFAULT_FLOAT_DIGITS))
        }
        (None, Some(p)) => NumericMode::float(p),
        (None, None) => default,
    })
}

fn scalar(s: &str, what: &str) -> Result<Scalar> {
    parse_scalar(s.trim()).map_err(|e| anyhow!("invalid {what} {s:?}: {e}"))
}

fn scalars(s: &str, what: &str) -> Result<Vec<Scalar>> {
    s.split(',').map(|p| scalar(p, what)).collect()
}

fn interval(s: &str) -> Result<Interval> {
    s.parse()
        .map_err(|e| anyhow!("invalid interval {s:?}: {e}"))
}

fn tol(g: &Global, default: Scalar) -> Result<Scalar> {
    match &g.tol {
        Some(t) => {
            let t = scalar(t, "tolerance")?;
            if t < 0 {
                bail!("--tol must be nonnegative");
            }
            Ok(t)
        }
        None => Ok(default),
    }
}

fn render(
    format: Format,
    json: impl FnOnce() -> String,
    csv: impl FnOnce() -> String,
    text: impl FnOnce() -> String,
) -> String {
    match format {
        Format::Json => json(),
        Format::Csv => csv(),
        Format::Text => text(),
    }
}

fn emit(s: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, s).with_context(|| format!("cannot write {}", path.display()))
        }
        None => {
            let mut stdout = io::stdout().lock();
            let written = stdout.write_all(s.as_bytes()).and_then(|()| {
                if s.ends_with('\n') {
                    Ok(())
                } else {
                    stdout.write_all(b"\n")
                }
            });
            match written {
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
                _ => Ok(()),
            }
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let g = &cli.global;
    match cli.command {
        Command::Enclose {
            poly,
            x0,
            method,
            beta,
            zero,
        } => {
            let p = Polynomial::new(scalars(&poly, "coefficient")?);
            let x0 = interval(&x0)?;
            let f = BracketedFunction::check(p, x0.clone())
                .map_err(|e| anyhow!("not a bracket: {e}"))?;
            let beta = scalar(&beta, "beta")?;
            let method = match method {
                MethodArg::MooreNewton => Method::MooreNewton,
                MethodArg::KingLike => Method::KingLike { beta },
                MethodArg::ThreePoint => Method::ThreePoint { beta },
            };
            let zero = zero.map(|z| scalar(&z, "zero")).transpose()?;
            if let Some(z) = &zero {
                if !x0.contains(z) {
                    bail!("--zero must lie in --x0");
                }
            }
            let defaults = RunConfig::default();
            let cfg = RunConfig {
                mode: mode(g, NumericMode::Exact)?,
                tol: tol(g, defaults.tol)?,
                max_iter: g.max_iter.unwrap_or(defaults.max_iter),
            };
            let trace = run_enclosure(&method, &f, &x0, &cfg, zero.as_ref());
            emit(
                &render(
                    g.format,
                    || serde_json::to_string_pretty(&trace.to_json()).unwrap(),
                    || trace.to_csv(),
                    || trace.to_text(),
                ),
                None,
            )
        }
        Command::Example { which } => {
            let which = if which == 1 {
                Example::Example1
            } else {
                Example::Example2
            };
            let r = lab::reproduce_example(which, mode(g, NumericMode::Exact)?);
            emit(
                &render(g.format, || r.to_json(), || r.to_csv(), || r.to_text()),
                None,
            )
        }
        Command::Study {
            experiments,
            polys,
            betas,
            seed,
            x0,
            full,
            out,
        } => {
            let mut cfg = if full {
                StudyConfig::full(seed)
            } else {
                StudyConfig::smoke(seed)
            };
            if let Some(n) = experiments {
                cfg.n_experiments = n;
            }
            if let Some(n) = polys {
                cfg.n_polynomials = n;
            }
            if let Some(b) = betas {
                cfg.beta_grid = scalars(&b, "beta")?;
            }
            if let Some(x) = x0 {
                cfg.x0 = interval(&x)?;
            }
            cfg.mode = mode(g, cfg.mode)?;
            cfg.tol = tol(g, cfg.tol)?;
            if let Some(m) = g.max_iter {
                cfg.max_iter = m;
            }
            cfg.validate()?;
            let r = lab::failure_rate_study(&cfg)?;
            emit(
                &render(g.format, || r.to_json(), || r.to_csv(), || r.to_text()),
                out.as_ref(),
            )
        }
        Command::Coc { betas, smallness } => {
            let mut cfg = CocConfig::default();
            if let Some(b) = betas {
                cfg.beta_grid = scalars(&b, "beta")?;
            }
            cfg.smallness = scalar(&smallness, "smallness")?;
            cfg.mode = mode(g, cfg.mode)?;
            if let Some(m) = g.max_iter {
                if m == 0 {
                    bail!("--max-iter must be positive");
                }
                cfg.king_iterations = m;
            }
            let r = lab::coc_study(&lab::coc_corpus(), &cfg);
            emit(
                &render(g.format, || r.to_json(), || r.to_csv(), || r.to_text()),
                None,
            )
        }
        Command::Figure { which } => {
            let d = lab::figure_data(if which == 1 {
                Figure::Fig1
            } else {
                Figure::Fig2
            });
            emit(
                &render(g.format, || d.to_json(), || d.to_csv(), || d.to_text()),
                None,
            )
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("enclab: {e:#}");
            ExitCode::from(2)
        }
    }
}
