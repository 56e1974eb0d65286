use std::path::PathBuf;

use thiserror::Error;

/// Failure of a command, carrying its process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed state file: {0}")]
    Format(String),
    #[error("invalid input: {0}")]
    Validation(#[from] cohcorr_core::Error),
    #[error("verification failed: {failed} of {trials} trials")]
    Verification { failed: usize, trials: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io { .. } | CliError::Format(_) | CliError::Validation(_) => 2,
            CliError::Verification { .. } => 3,
        }
    }
}
