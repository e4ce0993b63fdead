//! CLI failures and their exit codes.

use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Bad flags or inputs, including unreadable and malformed files.
pub const EXIT_USAGE: u8 = 2;
/// Encrypted PDFs and documents without extractable text.
pub const EXIT_UNSUPPORTED: u8 = 3;
pub const EXIT_INTERNAL: u8 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{}: no such file", path.display())]
    NotFound { path: PathBuf },

    #[error("{}: {source}", path.display())]
    Read { path: PathBuf, source: io::Error },

    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: io::Error },

    #[error("{}: invalid JSON: {source}", path.display())]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },

    #[error("{}: {source}", path.display())]
    Input {
        path: PathBuf,
        source: structpass::Error,
    },

    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn input(path: impl Into<PathBuf>, source: structpass::Error) -> Self {
        CliError::Input {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input {
                source: structpass::Error::Unsupported(_) | structpass::Error::EmptyDocument,
                ..
            } => EXIT_UNSUPPORTED,
            CliError::Internal(_) => EXIT_INTERNAL,
            _ => EXIT_USAGE,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
