//! `girg`: reproducible GIRG experiments with CSV outputs.
//!
//! Exit codes: 0 success, 2 invalid input, 3 I/O failure, 4 internal
//! invariant breach.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{ExperimentConfig, ExtraArgs, SharedArgs};

#[derive(Debug, Parser)]
#[command(name = "girg", version, about = "GIRGs under Boolean distance functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample one instance: edges.csv, positions.csv, weights.csv, params.json.
    Generate {
        #[command(flatten)]
        shared: SharedArgs,
    },
    /// Exact vs Monte Carlo ball volumes, volume slope and depth, and the
    /// stochastic triangle check.
    VolumeCheck {
        #[command(flatten)]
        shared: SharedArgs,
        /// Monte Carlo points.
        #[arg(long)]
        samples: Option<usize>,
        /// Comma-separated radii.
        #[arg(long, value_delimiter = ',')]
        radii: Option<Vec<f64>>,
        /// Comma-separated epsilons for the triangle check.
        #[arg(long, value_delimiter = ',')]
        epsilons: Option<Vec<f64>>,
    },
    /// Sample and analyse one instance per (n, seed).
    ScalingStudy {
        #[command(flatten)]
        shared: SharedArgs,
        /// Comma-separated vertex counts.
        #[arg(long, value_delimiter = ',')]
        n_grid: Option<Vec<usize>>,
        /// Number of consecutive seeds starting at --seed.
        #[arg(long)]
        seeds: Option<usize>,
    },
    /// Phased two-round exposure with the giant growth indicator.
    TwoRound {
        #[command(flatten)]
        shared: SharedArgs,
        #[arg(long)]
        seeds: Option<usize>,
    },
    /// Analyse an instance written by `generate`.
    Analyze {
        #[command(flatten)]
        shared: SharedArgs,
        /// Directory holding the instance files.
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Io(String),
    Invariant(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Io(_) => 3,
            CliError::Invariant(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Invariant(m) => write!(f, "internal invariant breach: {m}"),
        }
    }
}

impl From<bdf_girg::Error> for CliError {
    fn from(e: bdf_girg::Error) -> Self {
        use bdf_girg::Error::*;
        match e {
            Io(_) | Format(_) => CliError::Io(e.to_string()),
            Invariant(_) => CliError::Invariant(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate { shared } => {
            let cfg = ExperimentConfig::resolve("generate", &shared, ExtraArgs::default())?;
            commands::generate(&cfg, shared.force)
        }
        Command::VolumeCheck {
            shared,
            samples,
            radii,
            epsilons,
        } => {
            let extra = ExtraArgs {
                samples,
                radii,
                epsilons,
                ..Default::default()
            };
            let cfg = ExperimentConfig::resolve("volume-check", &shared, extra)?;
            commands::volume_check(&cfg, shared.force)
        }
        Command::ScalingStudy {
            shared,
            n_grid,
            seeds,
        } => {
            let extra = ExtraArgs {
                n_grid,
                seeds,
                ..Default::default()
            };
            let cfg = ExperimentConfig::resolve("scaling-study", &shared, extra)?;
            commands::scaling_study(&cfg, shared.force)
        }
        Command::TwoRound { shared, seeds } => {
            let extra = ExtraArgs {
                seeds,
                ..Default::default()
            };
            let cfg = ExperimentConfig::resolve("two-round", &shared, extra)?;
            commands::two_round(&cfg, shared.force)
        }
        Command::Analyze { shared, input } => {
            let extra = ExtraArgs {
                input,
                ..Default::default()
            };
            let cfg = ExperimentConfig::resolve("analyze", &shared, extra)?;
            commands::analyze(&cfg, shared.force)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("girg: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
