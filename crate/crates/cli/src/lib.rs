//! Driver for `walker-core`: JSON run configurations, the `frenet`,
//! `surface-check`, `construct` and `verify` commands, and the property
//! suites behind `verify`.

pub mod commands;
pub mod config;
pub mod output;
pub mod suites;

use thiserror::Error;
use walker_core::GeometryError;

/// Exit status for configuration and usage errors.
pub const EXIT_USAGE: i32 = 1;
/// Exit status when a computation fails or a property does not hold.
pub const EXIT_FAILURE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("stage {stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: GeometryError,
    },
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Stage { .. } => EXIT_FAILURE,
            _ => EXIT_USAGE,
        }
    }

    /// Input problems become configuration errors, everything else a failed stage.
    pub fn from_geometry(stage: &'static str, e: GeometryError) -> CliError {
        match e {
            GeometryError::Expr(_) | GeometryError::InvalidInput(_) => CliError::Config(e.to_string()),
            source => CliError::Stage { stage, source },
        }
    }
}
