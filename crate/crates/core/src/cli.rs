//! Command-line front end. [`run`] does all the work and returns the exit
//! code together with the text destined for stdout and stderr, so the
//! binary stays a thin wrapper and tests can drive commands in-process.
//!
//! Exit codes: 0 success, 1 domain violation or failed check, 2 I/O or
//! usage error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::dbn::{parse_dbn, parse_dbn_unchecked, validate_dbn, Dbn, DbnError};
use crate::divergence::DivergenceKind;
use crate::formigram::{detect_events, formigram_of, smooth_formigram, Formigram};
use crate::graph::{build_dbg, DynamicBayesianGraph};
use crate::metrics::{optimal_matching, stability_check};
use crate::oracle::oracle_barcode;
use crate::report;
use crate::strength::strength_table;
use crate::zigzag::{zigzag_barcode, Barcode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Svg,
}

#[derive(Debug, Parser)]
#[command(name = "dbg-persist", version, about = "Clustering barcodes of dynamic Bayesian networks")]
pub struct Cli {
    /// Divergence used for edge strengths: tv, kl, hellinger or bhattacharyya.
    #[arg(long, global = true, default_value = "tv")]
    pub divergence: DivergenceKind,
    /// Edge threshold; an edge is kept when its strength exceeds it.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub eta: Option<f64>,
    /// Smoothing radius, or a comma-separated list for `stability`.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub eps: Vec<f64>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Compute barcodes with the GF(2) reference reduction.
    #[arg(long, global = true, hide = true)]
    pub oracle: bool,
    /// Seed for randomized commands.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a network document and list every violation.
    Validate { path: PathBuf },
    /// Edge strengths of every intra-slice edge at every slice.
    Strengths { path: PathBuf },
    /// The thresholded dynamic graph.
    Graph { path: PathBuf },
    /// Path-component partitions over time.
    Formigram { path: PathBuf },
    /// H0 zigzag barcode, optionally after smoothing by `--eps`.
    Barcode { path: PathBuf },
    /// Merge and disband events in chronological order.
    Events { path: PathBuf },
    /// Clusters at the midpoint of slice `k`.
    Clusters { path: PathBuf, k: usize },
    /// Bottleneck distance between the barcodes of two networks.
    Compare {
        a: PathBuf,
        b: PathBuf,
        /// Threshold for the second network (defaults to `--eta`).
        #[arg(long, allow_hyphen_values = true)]
        eta_b: Option<f64>,
    },
    /// Checks the smoothing bound for each radius in `--eps`.
    Stability { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn domain(message: impl ToString) -> Failure {
    Failure {
        code: 1,
        message: message.to_string(),
    }
}

type Res<T> = Result<T, Failure>;

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome::ok(text)
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match execute(&cli) {
        Ok(out) => out,
        Err(f) => Outcome {
            code: f.code,
            stdout: String::new(),
            stderr: format!("error: {}\n", f.message),
        },
    }
}

fn read(path: &Path) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Res<Dbn> {
    parse_dbn(&read(path)?).map_err(|e| domain(format!("{}: {e}", path.display())))
}

fn require_eta(eta: Option<f64>) -> Res<f64> {
    match eta {
        Some(x) if x.is_nan() => Err(usage("--eta must be a number")),
        Some(x) => Ok(x),
        None => Err(usage("--eta is required for this command")),
    }
}

fn check_eps(eps: &[f64]) -> Res<()> {
    match eps.iter().find(|e| !(**e >= 0.0)) {
        Some(e) => Err(usage(format!("--eps must be nonnegative, got {e}"))),
        None => Ok(()),
    }
}

fn graph_of(path: &Path, eta: f64, kind: DivergenceKind) -> Res<(Dbn, DynamicBayesianGraph)> {
    let dbn = load(path)?;
    let table = strength_table(&dbn, kind).map_err(domain)?;
    let dbg = build_dbg(&table, eta, dbn.delta_t).map_err(domain)?;
    Ok((dbn, dbg))
}

fn barcode(fg: &Formigram, oracle: bool) -> Res<Barcode> {
    if oracle {
        oracle_barcode(fg).map_err(domain)
    } else {
        Ok(zigzag_barcode(fg))
    }
}

fn single_eps(cli: &Cli) -> Res<Option<f64>> {
    check_eps(&cli.eps)?;
    match cli.eps.as_slice() {
        [] => Ok(None),
        [e] => Ok(Some(*e)),
        _ => Err(usage("this command takes a single --eps value")),
    }
}

fn emit(cli: &Cli, json: impl FnOnce() -> serde_json::Value, text: impl FnOnce() -> String) -> Res<String> {
    match cli.format {
        Format::Json => Ok(report::to_json(&json())),
        Format::Text => Ok(text()),
        Format::Svg => Err(usage("--format svg is only available for `barcode`")),
    }
}

fn execute(cli: &Cli) -> Res<Outcome> {
    if let Some(seed) = cli.seed {
        log::debug!("seed {seed} (no randomized step in this command)");
    }
    let kind = cli.divergence;
    match &cli.command {
        Command::Validate { path } => {
            let dbn = match parse_dbn_unchecked(&read(path)?) {
                Ok(d) => d,
                Err(DbnError::Invalid(v)) => return Ok(violations(cli, &v)),
                Err(e) => return Err(domain(format!("{}: {e}", path.display()))),
            };
            Ok(violations(cli, &validate_dbn(&dbn)))
        }
        Command::Strengths { path } => {
            let table = strength_table(&load(path)?, kind).map_err(domain)?;
            emit(cli, || report::strengths_json(&table), || report::strengths_text(&table)).map(Outcome::ok)
        }
        Command::Graph { path } => {
            let (_, dbg) = graph_of(path, require_eta(cli.eta)?, kind)?;
            emit(cli, || report::dbg_json(&dbg), || report::dbg_text(&dbg)).map(Outcome::ok)
        }
        Command::Formigram { path } => {
            let eps = single_eps(cli)?;
            let (_, dbg) = graph_of(path, require_eta(cli.eta)?, kind)?;
            let fg = smoothed(formigram_of(&dbg), eps)?;
            emit(cli, || report::formigram_json(&fg), || report::formigram_text(&fg)).map(Outcome::ok)
        }
        Command::Barcode { path } => {
            let eps = single_eps(cli)?;
            let (_, dbg) = graph_of(path, require_eta(cli.eta)?, kind)?;
            let fg = smoothed(formigram_of(&dbg), eps)?;
            let bc = barcode(&fg, cli.oracle)?;
            let out = match cli.format {
                Format::Json => report::to_json(&report::barcode_json(&bc)),
                Format::Text => report::barcode_text(&bc),
                Format::Svg => report::barcode_svg(&bc, fg.horizon()),
            };
            Ok(Outcome::ok(out))
        }
        Command::Events { path } => {
            let (_, dbg) = graph_of(path, require_eta(cli.eta)?, kind)?;
            let fg = formigram_of(&dbg);
            let events = detect_events(&fg);
            emit(
                cli,
                || report::events_json(&events, &fg.names),
                || report::events_text(&events, &fg.names),
            )
            .map(Outcome::ok)
        }
        Command::Clusters { path, k } => {
            let (dbn, dbg) = graph_of(path, require_eta(cli.eta)?, kind)?;
            if *k > dbn.last_slice() {
                return Err(usage(format!("slice {k} out of range 0..={}", dbn.last_slice())));
            }
            let t = (2 * k + 1) as f64 * dbn.delta_t / 2.0;
            let p = formigram_of(&dbg).partition_at(t).map_err(domain)?.clone();
            emit(
                cli,
                || report::clusters_json(*k, t, &p, &dbg.names),
                || report::clusters_text(*k, t, &p, &dbg.names),
            )
            .map(Outcome::ok)
        }
        Command::Compare { a, b, eta_b } => {
            let eta_a = require_eta(cli.eta)?;
            let eta_b = require_eta(eta_b.or(cli.eta))?;
            let (_, ga) = graph_of(a, eta_a, kind)?;
            let (_, gb) = graph_of(b, eta_b, kind)?;
            let ba = barcode(&formigram_of(&ga), cli.oracle)?;
            let bb = barcode(&formigram_of(&gb), cli.oracle)?;
            let m = optimal_matching(&ba, &bb);
            emit(cli, || report::compare_json(&ba, &bb, &m), || report::compare_text(&ba, &bb, &m)).map(Outcome::ok)
        }
        Command::Stability { path } => {
            check_eps(&cli.eps)?;
            let (dbn, dbg) = graph_of(path, require_eta(cli.eta)?, kind)?;
            let grid = if cli.eps.is_empty() {
                let dt = dbn.delta_t;
                vec![0.0, dt / 2.0, dt, 2.0 * dt]
            } else {
                cli.eps.clone()
            };
            let reports = grid
                .iter()
                .map(|&e| stability_check(&dbg, e).map_err(domain))
                .collect::<Res<Vec<_>>>()?;
            let out = emit(cli, || report::stability_json(&reports), || report::stability_text(&reports))?;
            let code = if reports.iter().all(|r| r.pass) { 0 } else { 1 };
            Ok(Outcome {
                code,
                stdout: out,
                stderr: String::new(),
            })
        }
    }
}

fn smoothed(fg: Formigram, eps: Option<f64>) -> Res<Formigram> {
    match eps {
        None => Ok(fg),
        Some(e) => smooth_formigram(&fg, e).map_err(domain),
    }
}

fn violations<V: ToString>(cli: &Cli, v: &[V]) -> Outcome {
    let lines: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    let stdout = match cli.format {
        Format::Json => report::to_json(&serde_json::json!({
            "status": if lines.is_empty() { "OK" } else { "INVALID" },
            "violations": lines,
        })),
        _ if lines.is_empty() => "OK\n".into(),
        _ => lines.iter().map(|l| format!("{l}\n")).collect(),
    };
    Outcome {
        code: if lines.is_empty() { 0 } else { 1 },
        stdout,
        stderr: String::new(),
    }
}
