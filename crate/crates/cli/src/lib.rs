//! Command-line workflows over the `shockrisk` library: model analytics,
//! Monte Carlo estimation of the survival curve, ruin path simulation and
//! cross-route validation.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod manifest;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub use config::{LoadedConfig, ModelConfig};
pub use manifest::RunManifest;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("I/O error: {0}")]
    Io(String),
    #[error("net profit condition violated: premium rate {premium} does not exceed expected claims {claim_rate} per unit time")]
    NetProfit { premium: f64, claim_rate: f64 },
    #[error("validation failed: {}", .0.join(", "))]
    Validation(Vec<String>),
    #[error("model error: {0}")]
    Model(#[from] shockrisk::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::NetProfit { .. } => 2,
            CliError::Config(_) | CliError::Io(_) => 3,
            CliError::Model(shockrisk::Error::NetProfitViolated { .. }) => 2,
            CliError::Model(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "shockrisk", version, about = "Ruin analysis for a two-line risk model with common shocks")]
pub struct Cli {
    /// Worker threads for Monte Carlo work; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print closed-form analytics and moments at t = 1.
    Analyze(AnalyzeArgs),
    /// Estimate the survival curve and its density by compound-geometric sampling.
    SimulateM(SimulateMArgs),
    /// Simulate surplus paths and record ruin events.
    SimulatePaths(SimulatePathsArgs),
    /// Run the cross-route consistency checks.
    Validate(ValidateArgs),
}

#[derive(Debug, clap::Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Also write the report as `quantity,value` CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct SimulateMArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Defaults to 20 times the mean deficit over the safety loading.
    #[arg(long)]
    pub grid_max: Option<f64>,
    /// Defaults to grid_max / 1000.
    #[arg(long)]
    pub grid_step: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, clap::Args)]
pub struct SimulatePathsArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value_t = 100_000)]
    pub paths: u64,
    #[arg(long, default_value_t = 1e4)]
    pub horizon: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Quick,
    Full,
}

impl Level {
    pub fn samples(self) -> u64 {
        match self {
            Level::Quick => 100_000,
            Level::Full => 1_000_000,
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Level::Quick)]
    pub level: Level,
}

/// Runs one parsed invocation, writing the human-readable report to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Config(format!("cannot start {n} worker threads: {e}")))?;
            let mut buffer = Vec::new();
            let result = pool.install(|| dispatch(cli.command, &mut buffer));
            out.write_all(&buffer).map_err(io_error)?;
            result
        }
        None => dispatch(cli.command, out),
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Analyze(args) => commands::analyze(&args, out),
        Command::SimulateM(args) => commands::simulate_m(&args, out),
        Command::SimulatePaths(args) => commands::simulate_paths(&args, out),
        Command::Validate(args) => commands::validate(&args, out),
    }
}

pub(crate) fn io_error(e: impl std::fmt::Display) -> CliError {
    CliError::Io(e.to_string())
}
