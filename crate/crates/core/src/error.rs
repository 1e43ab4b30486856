use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid config at `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("signal has zero variance")]
    DegenerateSignal,

    #[error("signal too short: need at least {needed} samples, got {got}")]
    SignalTooShort { needed: usize, got: usize },

    #[error("malformed WAV at byte {offset}: {message}")]
    WavParse { offset: u64, message: String },

    #[error("unsupported WAV format: {0}")]
    UnsupportedFormat(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error in {}{}: {message}", path.display(), row.map(|r| format!(" (row {r})")).unwrap_or_default())]
    Csv {
        path: PathBuf,
        row: Option<u64>,
        message: String,
    },

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("PNG encoding error: {0}")]
    Png(String),

    #[error("dataset generation stopped after {written} of {total} files: {first_error}")]
    PartialOutput {
        written: usize,
        total: usize,
        first_error: String,
    },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by bad user input (parameters, config, CSV
    /// schema) rather than by the environment.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Parameter(_) | Error::Config { .. } | Error::Csv { .. })
    }
}
