//! Configuration, parameter sweeps, plot scripts and the cross-validation
//! suite of the `ris-coverage` tool.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod config;
pub mod oracles;
pub mod plot;
pub mod sweep;

use std::path::PathBuf;

use ris_coverage_core::Error as CoreError;

/// Environment variable capping the number of worker threads (0 = auto).
pub const THREADS_ENV: &str = "RIS_COVERAGE_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },

    #[error("{0}")]
    Core(#[from] CoreError),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),

    #[error("{failed} sweep evaluation(s) failed; see {sidecar}")]
    SweepFailures { failed: usize, sidecar: PathBuf },
}

impl CliError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// Process exit status: 1 for configuration problems, 2 for numeric
    /// failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Io { .. } => 1,
            CliError::Core(CoreError::Config(_)) => 1,
            CliError::Core(_) | CliError::Csv(_) | CliError::SweepFailures { .. } => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
