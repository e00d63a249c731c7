mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rodstab_core::Error;

use config::Common;

#[derive(Debug, Parser)]
#[command(name = "rodstab", version, about = "Stability of naturally curved Kirchhoff rods")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Limit coefficients of the rod.
    Coeffs,
    /// Critical force of the straight rod.
    CriticalForce {
        /// Also compute the discretized value on N elements.
        #[arg(long, value_name = "N")]
        numeric: Option<usize>,
    },
    /// Conjugate-point scan along a flat helix.
    Scan,
    /// Verdicts over a (w_z, chi) grid.
    Sweep {
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        wz_list: Vec<f64>,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        chi_list: Vec<f64>,
    },
    /// Discrete energy minimization.
    Minimize {
        #[arg(long, value_enum, default_value_t = commands::Init::Random)]
        init: commands::Init,
        #[arg(long, default_value_t = 20_000)]
        max_iter: usize,
    },
    /// Flat helix through (f, delta).
    Helix,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error(transparent)]
    Io(#[from] anyhow::Error),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Core(e) => core_code(e),
            CliError::Io(_) => 1,
        }
    }
}

pub fn core_code(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_)
        | Error::UnsupportedBc(_)
        | Error::InvalidDelta(_)
        | Error::ZeroForce
        | Error::BcViolation { .. } => 2,
        Error::NoConvergence { .. } => 4,
        _ => 3,
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = config::RunConfig::from_common(&cli.common)?;
    let stem = cli.common.output.as_deref();
    let fmt = cli.common.format;
    match cli.command {
        Command::Coeffs => commands::coeffs(&cfg, stem, fmt),
        Command::CriticalForce { numeric } => commands::critical_force(&cfg, numeric, stem, fmt),
        Command::Scan => commands::scan(&cfg, stem, fmt),
        Command::Sweep { wz_list, chi_list } => commands::sweep(&cfg, &wz_list, &chi_list, cli.common.jobs, stem, fmt),
        Command::Minimize { init, max_iter } => commands::minimize(&cfg, init, max_iter, stem),
        Command::Helix => commands::helix(&cfg, stem, fmt),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("RODSTAB_LOG", "error")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
