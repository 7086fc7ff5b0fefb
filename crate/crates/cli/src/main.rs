//! `canonent`: analyze two-particle states, sweep random ensembles and run
//! the brute-force verification.
//!
//! Exit codes: 0 success, 2 input or validation error, 3 tolerance breach,
//! 64 usage error.

mod checks;
mod commands;
mod format;

use std::path::PathBuf;
use std::process::ExitCode;

use canonent::ParticleKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "canonent",
    version,
    about = "Canonical entanglement of two indistinguishable particles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Canonical form, correlation and entanglement measures of a state file.
    Analyze(AnalyzeArgs),
    /// Tabulate the measures over seeded random states into a CSV file.
    Sweep(SweepArgs),
    /// Compare the analytic results with brute-force Fock space calculations.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Debug, Args)]
struct Tolerance {
    /// Absolute tolerance for normalization, residuals and oracle deltas.
    #[arg(long, env = "CANONENT_TOLERANCE", default_value_t = canonent::DEFAULT_TOLERANCE)]
    tolerance: f64,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    /// State file: {"kind", "modes", "omega": [[[re, im], …], …]}.
    path: PathBuf,
    /// Rescale an unnormalized state instead of rejecting it.
    #[arg(long)]
    normalize: bool,
    #[command(flatten)]
    tolerance: Tolerance,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Include the mode transformation U in the report.
    #[arg(long)]
    emit_u: bool,
    /// Also run the brute-force oracle checks.
    #[arg(long)]
    verify: bool,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    kind: ParticleKind,
    /// Number of canonical pairs N (M = 2N fermion modes, N boson modes).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=4096))]
    pairs: u64,
    /// Number of samples; sample i uses seed + i.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    count: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    tolerance: Tolerance,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// State file to verify.
    #[arg(required_unless_present = "random", conflicts_with = "random")]
    path: Option<PathBuf>,
    /// Verify a random state instead of a file.
    #[arg(long, num_args = 3, value_names = ["KIND", "N", "SEED"])]
    random: Option<Vec<String>>,
    /// Rescale an unnormalized state instead of rejecting it.
    #[arg(long)]
    normalize: bool,
    #[command(flatten)]
    tolerance: Tolerance,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

/// Failure classes, each with its stable exit code.
#[derive(Debug)]
pub(crate) enum Failure {
    Usage(String),
    Input(String),
    Tolerance(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 64,
            Failure::Input(_) => 2,
            Failure::Tolerance(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Input(m) | Failure::Tolerance(m) => m,
        }
    }
}

impl From<canonent::Error> for Failure {
    fn from(e: canonent::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Analyze(args) => commands::analyze(&args),
        Command::Sweep(args) => commands::sweep(&args),
        Command::Verify(args) => commands::verify(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("canonent: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
