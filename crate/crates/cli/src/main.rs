//! `fracwave` command-line front end.

mod commands;
mod config;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::verify::Suite;

#[derive(Parser, Debug)]
#[command(
    name = "fracwave",
    version,
    about = "Spectral solver for fractional wave equations on compact groups"
)]
struct Cli {
    /// TOML run configuration; defaults apply to missing keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (created if missing).
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Seed for random data; overrides the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Run sweep points one after another.
    #[arg(long, global = true)]
    serial: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fixed-step nonlinear solve; writes trajectory.csv and summary.json.
    Solve,
    /// Lifespan over an amplitude sweep; writes sweep.csv and fit.json.
    LifespanSweep,
    /// Runs a verification suite; writes verify_<suite>.json.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Klein-Gordon solve; writes energy.csv and summary.json.
    KgSolve,
    /// Blow-up bound for the `[kato]` parameters; writes kato.json.
    KatoCheck,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad invocation or configuration: exit code 2.
    Usage(String),
    /// A check failed: exit code 1.
    Check(String),
}

impl From<fracwave::Error> for CliError {
    fn from(e: fracwave::Error) -> Self {
        use fracwave::Error as E;
        match e {
            E::InvalidParameter(_)
            | E::Inadmissible(_)
            | E::SizeMismatch { .. }
            | E::KatoInapplicable(_)
            | E::WrongLemma(_)
            | E::HypothesisViolation(_)
            | E::DegenerateSweep(_) => CliError::Usage(e.to_string()),
            other => CliError::Check(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Check(format!("i/o error: {e}"))
    }
}

pub struct Context {
    pub cfg: config::RunConfig,
    pub out: PathBuf,
    pub serial: bool,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = config::RunConfig::load(cli.config.as_deref(), cli.seed)?;
    std::fs::create_dir_all(&cli.out)
        .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", cli.out.display())))?;
    let ctx = Context {
        cfg,
        out: cli.out,
        serial: cli.serial,
    };
    match cli.command {
        Command::Solve => commands::solve(&ctx),
        Command::LifespanSweep => commands::lifespan_sweep(&ctx),
        Command::Verify { suite } => verify::run(&ctx, suite),
        Command::KgSolve => commands::kg_solve(&ctx),
        Command::KatoCheck => commands::kato_check(&ctx),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Check(m)) => {
            eprintln!("check failed: {m}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
