use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {reason}")]
    Unreadable { path: PathBuf, reason: String },

    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },

    #[error("bad argument: {0}")]
    Argument(String),

    #[error(transparent)]
    Core(#[from] ridgeflow::Error),
}

impl CliError {
    pub fn unreadable(path: impl Into<PathBuf>, reason: impl ToString) -> Self {
        Self::Unreadable {
            path: path.into(),
            reason: reason.to_string(),
        }
    }

    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Unreadable { .. } | Self::Argument(_) => 2,
            Self::Core(ridgeflow::Error::EmptyForeground) => 3,
            Self::Core(ridgeflow::Error::NoReliableSegments) => 4,
            Self::Core(ridgeflow::Error::IterationCapExceeded(_)) => 5,
            Self::Core(ridgeflow::Error::InvalidParameter(_)) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
