//! `slopelab`: runs job files and the built-in acceptance corpus.
//!
//! Exit codes: 0 success, 1 invalid input or a failed check, 2 a result that
//! is only a bound when `--require-exact` is set.

mod job;
mod report;
mod run;

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use slopelab_core::corpus::{self, CorpusOptions};
use slopelab_core::elimpres::{ElimError, DEFAULT_MAX_ROUNDS};
use slopelab_core::newton::NewtonError;
use slopelab_core::samuel::{SamuelError, SamuelOptions};
use thiserror::Error;

use crate::job::Job;
use crate::report::{Output, Report, REPORT_SCHEMA};
use crate::run::{kind_of, render, run_tasks, Settings};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Samuel(#[from] SamuelError),
    #[error(transparent)]
    Elim(#[from] ElimError),
    #[error(transparent)]
    Newton(#[from] NewtonError),
}

#[derive(Parser, Debug)]
#[command(name = "slopelab", version, about = "Exact Samuel slopes, asymptotic Samuel functions and H-ord")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit canonical JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Exit with status 2 when any result is only a bound.
    #[arg(long, global = true)]
    require_exact: bool,
    /// Largest power n used by the limit strategy for the asymptotic Samuel function.
    #[arg(long, global = true, value_name = "N")]
    max_n: Option<u32>,
    /// Cleaning rounds allowed for p-presentations.
    #[arg(long, global = true, value_name = "R")]
    max_rounds: Option<u32>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Asymptotic Samuel function of polynomials along ideals.
    Nubar { job: PathBuf },
    /// Slope, H-ord and cleaning transcript of p-presentations.
    Slope { job: PathBuf },
    /// Kernel of the map lambda on the tangent space.
    Kernel { job: PathBuf },
    /// Samuel slope of the local ring.
    SamuelSlope { job: PathBuf },
    /// Cross-checks of the extremal and non-extremal theorems.
    CheckTheorems { job: PathBuf },
    /// Runs the acceptance criteria on the built-in corpus.
    Corpus {
        /// Only criteria whose name, tag or number matches.
        #[arg(long)]
        filter: Option<String>,
        /// Corrupts one expected value; the run must then fail.
        #[arg(long)]
        inject_wrong: bool,
    },
}

fn read_job(path: &Path) -> Result<Job, CliError> {
    let mut text = String::new();
    let io = |source| CliError::Io { path: path.display().to_string(), source };
    if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut text).map_err(io)?;
    } else {
        text = std::fs::read_to_string(path).map_err(io)?;
    }
    Job::parse(&text)
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    let mut stdout = std::io::stdout().lock();
    let _ = writeln!(stdout, "{text}");
}

/// Pretty JSON with object keys sorted.
fn canonical<T: Serialize>(v: &T) -> String {
    let value = serde_json::to_value(v).expect("reports serialize");
    serde_json::to_string_pretty(&value).expect("values serialize")
}

fn run_job(cli: &Cli, op: &str, path: &Path) -> Result<ExitCode, CliError> {
    let job = read_job(path)?;
    let mut opts = SamuelOptions::default();
    if let Some(n) = cli.max_n {
        opts.limit_n = n;
    }
    let settings = Settings { opts, max_rounds: cli.max_rounds.unwrap_or(DEFAULT_MAX_ROUNDS) };
    let reports = run_tasks(&job, op, &settings)?;
    if cli.json {
        emit(&canonical(&Output { schema: REPORT_SCHEMA.into(), reports: reports.clone() }));
    } else {
        for r in &reports {
            emit(&render(r));
        }
    }
    let expected: Vec<&Report> = job.file.expect.iter().filter(|r| kind_of(op)(r)).collect();
    if !expected.is_empty() {
        if expected.len() != reports.len() {
            return Err(CliError::Invalid(format!(
                "{} expected reports but {} computed",
                expected.len(),
                reports.len()
            )));
        }
        for (i, (e, r)) in expected.iter().zip(&reports).enumerate() {
            if *e != r {
                return Err(CliError::Invalid(format!(
                    "report {i} differs from the expected one:\nexpected {}\ncomputed {}",
                    canonical(e),
                    canonical(r)
                )));
            }
        }
    }
    if reports.iter().any(|r| matches!(r, Report::Theorems(t) if !t.pass)) {
        eprintln!("error: a theorem cross-check failed");
        return Ok(ExitCode::from(1));
    }
    if cli.require_exact && reports.iter().any(|r| !r.is_exact()) {
        eprintln!("error: a result is only a bound and --require-exact is set");
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct RowJson<'a> {
    label: &'a str,
    expected: &'a str,
    computed: &'a str,
    ok: bool,
}

#[derive(Serialize)]
struct CriterionJson<'a> {
    id: u32,
    name: &'a str,
    tags: &'a [&'a str],
    pass: bool,
    rows: Vec<RowJson<'a>>,
}

#[derive(Serialize)]
struct CorpusJson<'a> {
    criteria: Vec<CriterionJson<'a>>,
    passed: usize,
    total: usize,
}

fn run_corpus(cli: &Cli, filter: Option<String>, inject_wrong: bool) -> Result<ExitCode, CliError> {
    let outcomes = corpus::run_all(&CorpusOptions { filter: filter.clone(), inject_wrong });
    if outcomes.is_empty() {
        return Err(CliError::Invalid(format!("no criterion matches {:?}", filter.unwrap_or_default())));
    }
    let passed = outcomes.iter().filter(|o| o.pass()).count();
    if cli.json {
        let criteria = outcomes
            .iter()
            .map(|o| CriterionJson {
                id: o.id,
                name: o.name,
                tags: o.tags,
                pass: o.pass(),
                rows: o
                    .rows
                    .iter()
                    .map(|r| RowJson { label: &r.label, expected: &r.expected, computed: &r.computed, ok: r.ok })
                    .collect(),
            })
            .collect();
        emit(&canonical(&CorpusJson { criteria, passed, total: outcomes.len() }));
    } else {
        for o in &outcomes {
            emit(&format!("criterion {} [{}]: {}", o.id, o.name, if o.pass() { "pass" } else { "fail" }));
            for r in &o.rows {
                emit(&format!(
                    "  {} {:<58} expected {:<28} computed {}",
                    if r.ok { "ok  " } else { "FAIL" },
                    r.label,
                    r.expected,
                    r.computed
                ));
            }
        }
        emit(&format!("{passed}/{} criteria pass", outcomes.len()));
    }
    Ok(if passed == outcomes.len() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Nubar { job } => run_job(&cli, "nubar", job),
        Command::Slope { job } => run_job(&cli, "slope", job),
        Command::Kernel { job } => run_job(&cli, "kernel", job),
        Command::SamuelSlope { job } => run_job(&cli, "samuel-slope", job),
        Command::CheckTheorems { job } => run_job(&cli, "check-theorems", job),
        Command::Corpus { filter, inject_wrong } => run_corpus(&cli, filter.clone(), *inject_wrong),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
