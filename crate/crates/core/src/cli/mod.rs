//! The `arclift` command line.
//!
//! `arclift <validate|desingularize|lift|extract|roundtrip|oracle> <problem.json> [flags]`
//!
//! Every command renders one report, as `key = value` text or as JSON with
//! sorted keys, so identical invocations give identical bytes. Exit codes:
//! 0 success, 1 structural or strictness failure, 2 certificate or order
//! failure, 3 no strict reference found, 4 parse or usage error.

mod commands;
mod input;

pub use input::{
    load_problem, parse_series_list, CertificateSpec, FieldSpec, ModeSpec, ProblemFile, NWORK_ENV,
};

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::arcs::ArcError;
use crate::desing::{DesingError, FailureKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Structural(String),
    #[error("{0}")]
    Certificate(String),
    #[error("{0}")]
    NotFound(String),
    #[error("{0}")]
    NotStrict(String),
    #[error("{0}")]
    OutOfFamily(String),
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 4,
            CliError::Certificate(_) => 2,
            CliError::NotFound(_) => 3,
            CliError::Structural(_)
            | CliError::NotStrict(_)
            | CliError::OutOfFamily(_)
            | CliError::Failure(_) => 1,
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse_error",
            CliError::Structural(_) => "structural_failure",
            CliError::Certificate(_) => "certificate_failure",
            CliError::NotFound(_) => "not_found",
            CliError::NotStrict(_) => "not_strict",
            CliError::OutOfFamily(_) => "out_of_family",
            CliError::Failure(_) => "failure",
        }
    }
}

impl From<DesingError> for CliError {
    fn from(e: DesingError) -> Self {
        match &e {
            DesingError::Invalid {
                kind: FailureKind::Structural,
                ..
            }
            | DesingError::Poly(_) => CliError::Structural(e.to_string()),
            _ => CliError::Certificate(e.to_string()),
        }
    }
}

impl From<ArcError> for CliError {
    fn from(e: ArcError) -> Self {
        match e {
            ArcError::Desing(d) => d.into(),
            ArcError::NotStrict { .. } => CliError::NotStrict(e.to_string()),
            ArcError::OutOfFamily { .. } => CliError::OutOfFamily(e.to_string()),
            ArcError::FieldNotFinite => CliError::Structural(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "arclift", version, about = "Exact arc lifting over k[x]_(x)")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the certificate, the jet and the order condition.
    Validate(Common),
    /// Build and verify the smooth model.
    Desingularize(Common),
    /// Lift arcs from free coordinates, offset parameters or random draws.
    Lift(LiftArgs),
    /// Recover t (and, with a reference, the offset parameters) from an arc.
    Extract(ExtractArgs),
    /// Offset-lift seeded parameters and extract them again.
    Roundtrip(RoundtripArgs),
    /// Enumerate jets over F_q by brute force and test sampled lifts against them.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct Common {
    /// Problem file (JSON).
    problem: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Working precision N_work (overrides the file and ARCLIFT_NWORK).
    #[arg(long = "n-work", value_name = "N")]
    n_work: Option<u32>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct LiftSource {
    /// Free coordinates t_(r+1)..t_n, comma-separated series.
    #[arg(long = "t-free", value_name = "LIST", allow_hyphen_values = true)]
    t_free: Option<String>,
    /// Offset parameters z against a strict reference.
    #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
    params: Option<String>,
    /// COUNT seeded random draws of t_free.
    #[arg(long, num_args = 2, value_names = ["SEED", "COUNT"])]
    random: Option<Vec<u64>>,
}

#[derive(Args, Debug)]
struct LiftArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    source: LiftSource,
    /// Working precision for this run (same as --n-work).
    #[arg(long, value_name = "N")]
    prec: Option<u32>,
    /// Strict reference arc for --params, comma-separated series.
    #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
    reference: Option<String>,
    #[arg(long = "search-depth", default_value_t = 8)]
    search_depth: u32,
}

#[derive(Args, Debug)]
struct ExtractArgs {
    #[command(flatten)]
    common: Common,
    /// The arc y'', comma-separated series.
    #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
    arc: String,
    /// Strict reference arc; when given, the offset parameters are extracted too.
    #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
    reference: Option<String>,
}

#[derive(Args, Debug)]
struct RoundtripArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    count: u32,
    #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
    reference: Option<String>,
    #[arg(long = "search-depth", default_value_t = 8)]
    search_depth: u32,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[command(flatten)]
    common: Common,
    /// Jet length m: jets are taken modulo x^m.
    #[arg(long, value_name = "M")]
    prec: u32,
    #[arg(long, default_value_t = 10)]
    samples: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "search-depth", default_value_t = 8)]
    search_depth: u32,
}

/// What a run produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Parses `args` (program name first) and runs the command. `nwork_env`
/// is the value of `ARCLIFT_NWORK`, if set.
pub fn run<I, T>(args: I, nwork_env: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome {
                        stdout: text,
                        stderr: String::new(),
                        code: 0,
                    }
                }
                _ => Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code: 4,
                },
            };
        }
    };
    commands::dispatch(cli.command, nwork_env)
}
