use std::path::PathBuf;

use thiserror::Error;

use crate::cotlang::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("format error at {location}: {message}")]
    Format { location: String, message: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("degenerate field: {0}")]
    Degenerate(String),

    #[error("separatrix tracing failed: {0}")]
    Tracing(String),

    #[error("topology error: {0}")]
    Topology(String),

    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("insufficient data: need at least {needed} samples, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn format(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Format { location: location.into(), message: message.into() }
    }
}
