//! Command-line front end: grid evaluation, validation suites and a
//! method benchmark. Exit codes are 0 on success, 1 when a check or a
//! computation fails, and 2 for usage and input errors.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bargwig::grid::Method;
use bargwig::states::StateSpec;
use bargwig::Error;
use clap::{Parser, Subcommand, ValueEnum};

pub mod bench;
pub mod check;
pub mod eval;

pub use bench::{cmd_bench, BenchArgs};
pub use check::{cmd_check, CheckArgs};
pub use eval::{cmd_eval, EvalArgs};

/// Environment variable capping the worker thread count.
pub const THREADS_VAR: &str = "BARGWIG_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "bargwig",
    version,
    about = "Wigner functions from Bargmann quadratic forms"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate W on a rectangular (q, p) grid.
    Eval(EvalArgs),
    /// Run validation suites and print a JSON report.
    Check(CheckArgs),
    /// Time evaluation methods against each other.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or inputs; exit code 2.
    Usage(String),
    /// A computation or check failed; exit code 1.
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Failure(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidBasis(_)
            | Error::InvalidState(_)
            | Error::Unnormalized { .. }
            | Error::ScaledAtOrigin
            | Error::CrossWidth { .. }
            | Error::NoClosedForm(_)
            | Error::InvalidParameter(_)
            | Error::Json(_) => CliError::Usage(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

pub(crate) fn parse_method(s: &str) -> Result<Method, String> {
    s.parse::<Method>().map_err(|_| {
        let names: Vec<_> = Method::ALL.iter().map(|m| m.name()).collect();
        format!(
            "unknown method '{s}' (expected one of {})",
            names.join(", ")
        )
    })
}

/// Reads a state description from a JSON file.
pub fn read_state(path: &Path, normalize: bool) -> Result<StateSpec<f64>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read state file {}: {e}", path.display())))?;
    StateSpec::from_json_str(&text, normalize)
        .map_err(|e| CliError::Usage(format!("invalid state file {}: {e}", path.display())))
}

/// Writes `text` to `out`, or to stdout when no path is given.
pub(crate) fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Failure(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "{THREADS_VAR} must be a positive integer, got '{raw}'"
        ))
    })?;
    // a pool may already exist when run() is called twice in one process
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match cli.command {
        Command::Eval(args) => eval::run(&args),
        Command::Check(args) => check::run(&args),
        Command::Bench(args) => bench::run(&args),
    }
}

/// Parses `args` and runs the selected subcommand.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bargwig: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
