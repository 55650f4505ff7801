//! Command-line front end.
//!
//! ```text
//! dtm solve  <file> [--order N] [--eval-from A] [--eval-to B] [--samples M]
//!                   [--step h] [--steps S] [--format csv|json] [--coeffs]
//! dtm coeffs <file> [--order N] [--format csv|json]
//! ```
//!
//! Problem files hold one `key = value` per line with keys `equation`
//! (double-quoted), `t0`, `u0`, `order`, `step` and `steps`; lines starting
//! with `#` are comments. Data goes to stdout, diagnostics to stderr. Exit
//! status is 1 for problem/equation/solver errors and 2 for I/O errors.

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::error::Error;
use crate::parser::parse;
use crate::series::Jet;
use crate::solver::{continue_multistep, eval_piecewise, solve_series, IvpProblem, SolveReport};

pub const DEFAULT_ORDER: usize = 20;
pub const DEFAULT_SAMPLES: usize = 11;

#[derive(Debug, Parser)]
#[command(name = "dtm", version, about = "Series solutions of u' = f(t, u)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the solution sampled on a uniform grid.
    Solve(Options),
    /// Print the transform coefficients U(k) about t0.
    Coeffs(Options),
}

#[derive(Debug, Args)]
struct Options {
    /// Problem file.
    file: PathBuf,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    eval_from: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    eval_to: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    step: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Print coefficients instead of samples.
    #[arg(long)]
    coeffs: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("cannot write output: {0}")]
    Output(#[from] io::Error),
    #[error("line {line}: {message}")]
    ProblemFile { line: usize, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Solve(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Output(_) => 2,
            _ => 1,
        }
    }
}

/// Contents of a problem file.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemFile {
    pub equation: String,
    pub t0: f64,
    pub u0: f64,
    pub order: Option<usize>,
    pub step: Option<f64>,
    pub steps: Option<usize>,
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut equation = None;
        let mut t0 = None;
        let mut u0 = None;
        let mut order = None;
        let mut step = None;
        let mut steps = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |message: String| CliError::ProblemFile { line, message };
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, value) = trimmed
                .split_once('=')
                .ok_or_else(|| err("expected `key = value`".into()))?;
            let key = key.trim();
            let value = value.trim();
            if key == "equation" {
                let inner = value
                    .strip_prefix('"')
                    .and_then(|v| v.split_once('"'))
                    .ok_or_else(|| err("equation must be a double-quoted string".into()))?;
                let rest = inner.1.trim();
                if !(rest.is_empty() || rest.starts_with('#')) {
                    return Err(err(format!("unexpected text after equation: {rest}")));
                }
                set(&mut equation, inner.0.to_string(), key).map_err(err)?;
                continue;
            }
            let value = value.split('#').next().unwrap_or("").trim();
            match key {
                "t0" => set(&mut t0, number(value, key).map_err(err)?, key),
                "u0" => set(&mut u0, number(value, key).map_err(err)?, key),
                "step" => set(&mut step, number(value, key).map_err(err)?, key),
                "order" => set(&mut order, count(value, key).map_err(err)?, key),
                "steps" => set(&mut steps, count(value, key).map_err(err)?, key),
                other => Err(format!("unknown key `{other}`")),
            }
            .map_err(err)?;
        }
        let missing = |key: &str| CliError::ProblemFile {
            line: 0,
            message: format!("missing `{key}`"),
        };
        Ok(ProblemFile {
            equation: equation.ok_or_else(|| missing("equation"))?,
            t0: t0.unwrap_or(0.0),
            u0: u0.ok_or_else(|| missing("u0"))?,
            order,
            step,
            steps,
        })
    }
}

fn set<T>(slot: &mut Option<T>, value: T, key: &str) -> Result<(), String> {
    if slot.replace(value).is_some() {
        return Err(format!("duplicate key `{key}`"));
    }
    Ok(())
}

fn number(value: &str, key: &str) -> Result<f64, String> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| format!("`{key}` must be a finite number, got `{value}`"))
}

fn count(value: &str, key: &str) -> Result<usize, String> {
    value
        .parse()
        .map_err(|_| format!("`{key}` must be a non-negative integer, got `{value}`"))
}

/// Shortest decimal string that parses back to the same `f64`; plain
/// notation for moderate magnitudes, exponent notation otherwise.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let a = x.abs();
    if !x.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// `m` uniformly spaced points from `a` to `b`, both included.
pub fn sample_grid(a: f64, b: f64, m: usize) -> Vec<f64> {
    match m {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..m)
            .map(|i| {
                if i == m - 1 {
                    b
                } else {
                    a + (b - a) * i as f64 / (m - 1) as f64
                }
            })
            .collect(),
    }
}

#[derive(Serialize)]
struct Sample {
    t: f64,
    u: f64,
}

#[derive(Serialize)]
struct SamplesDoc {
    samples: Vec<Sample>,
}

#[derive(Serialize)]
struct Coefficient {
    k: usize,
    u: f64,
}

#[derive(Serialize)]
struct CoeffsDoc {
    t0: f64,
    coefficients: Vec<Coefficient>,
}

/// Runs the CLI with explicit streams; returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let shown = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = if shown {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return if shown { 0 } else { 1 };
        }
    };
    match execute(cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let (opts, coeffs_only) = match cli.command {
        Command::Solve(o) => {
            let c = o.coeffs;
            (o, c)
        }
        Command::Coeffs(o) => (o, true),
    };
    let file = load(&opts.file)?;
    let rhs = parse(&file.equation)?;
    let order = opts.order.or(file.order).unwrap_or(DEFAULT_ORDER);
    let problem = IvpProblem::new(rhs, file.t0, file.u0, order)?;

    if coeffs_only {
        let report = solve_series(&problem)?;
        report_warnings(err, std::slice::from_ref(&report))?;
        return write_coeffs(out, &report.jet, opts.format);
    }

    let step = opts.step.or(file.step);
    let steps = opts.steps.or(file.steps);
    let (segments, h) = match (step, steps) {
        (Some(h), s) => (continue_multistep(&problem, h, s.unwrap_or(1))?, Some(h)),
        (None, Some(_)) => return Err(CliError::Usage("`steps` given without `step`".into())),
        (None, None) => (vec![solve_series(&problem)?], None),
    };
    report_warnings(err, &segments)?;

    let from = opts.eval_from.unwrap_or(problem.t0);
    let default_to = match h {
        Some(h) => problem.t0 + h * segments.len() as f64,
        None => problem.t0 + 1.0,
    };
    let to = opts.eval_to.unwrap_or(default_to);
    let samples = opts.samples.unwrap_or(DEFAULT_SAMPLES);
    if samples == 0 {
        return Err(CliError::Usage("`samples` must be at least 1".into()));
    }
    let rows: Vec<Sample> = sample_grid(from, to, samples)
        .into_iter()
        .map(|t| {
            let u = match h {
                Some(h) => eval_piecewise(&segments, h, t),
                None => segments[0].jet.eval_truncated(&t),
            };
            Sample { t, u }
        })
        .collect();
    match opts.format {
        Format::Csv => {
            writeln!(out, "t,u")?;
            for s in &rows {
                writeln!(out, "{},{}", format_float(s.t), format_float(s.u))?;
            }
        }
        Format::Json => {
            serde_json::to_writer(&mut *out, &SamplesDoc { samples: rows })
                .map_err(io::Error::from)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn load(path: &Path) -> Result<ProblemFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    ProblemFile::parse(&text)
}

fn report_warnings(err: &mut dyn Write, segments: &[SolveReport]) -> io::Result<()> {
    for (i, seg) in segments.iter().enumerate() {
        for w in &seg.warnings {
            writeln!(
                err,
                "warning: segment {i}: {} evaluated at {}, {} from its domain boundary",
                w.function,
                format_float(w.value),
                format_float(w.margin)
            )?;
        }
    }
    Ok(())
}

fn write_coeffs(out: &mut dyn Write, jet: &Jet<f64>, format: Format) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            writeln!(out, "k,coefficient")?;
            for (k, c) in jet.coeffs().iter().enumerate() {
                writeln!(out, "{k},{}", format_float(*c))?;
            }
        }
        Format::Json => {
            let doc = CoeffsDoc {
                t0: *jet.t0(),
                coefficients: jet
                    .coeffs()
                    .iter()
                    .enumerate()
                    .map(|(k, &u)| Coefficient { k, u })
                    .collect(),
            };
            serde_json::to_writer(&mut *out, &doc).map_err(io::Error::from)?;
            writeln!(out)?;
        }
    }
    Ok(())
}
