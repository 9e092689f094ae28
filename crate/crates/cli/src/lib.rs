//! Command-line front end for the LAA/Wi-Fi coexistence model: run-file
//! parsing, subcommands and CSV output.

pub mod commands;
pub mod config;
pub mod format;

use std::io;

use laacoex_core::experiments::ExperimentError;
use laacoex_core::{ModelError, SimError, SolveError};
use thiserror::Error;

pub use config::{parse_config, RunConfig};

/// Everything a subcommand can fail with. Each variant maps to a process
/// exit code through [`CliError::exit_code`].
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Structure(String),
    #[error("{0}")]
    Convergence(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Structure(_) => 3,
            CliError::Convergence(_) => 4,
            CliError::Io { .. } => 1,
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Model(m) => m.into(),
            SimError::InvalidConfig(_) => CliError::Config(e.to_string()),
            SimError::CalendarCorrupted { .. } => CliError::Structure(e.to_string()),
        }
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::Model(m) => m.into(),
            SolveError::NotConverged { .. } => CliError::Convergence(e.to_string()),
            SolveError::Reducible { .. } | SolveError::Singular { .. } => {
                CliError::Structure(e.to_string())
            }
        }
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Solve(s) => s.into(),
            ExperimentError::Sim(s) => s.into(),
            ExperimentError::QueueRange { .. } => CliError::Config(e.to_string()),
        }
    }
}
