use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{0}")]
    Usage(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: {reason}")]
    Format { context: String, reason: String },

    #[error("{}: {source}", path.display())]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error("plan line {line}: {reason}")]
    Plan { line: usize, reason: String },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Core(#[from] csrecon::Error),

    #[error("{0}")]
    Contract(String),
}

pub type Result<T> = std::result::Result<T, BenchError>;

impl BenchError {
    pub fn format(context: impl Into<String>, reason: impl Into<String>) -> Self {
        BenchError::Format {
            context: context.into(),
            reason: reason.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        BenchError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Usage(_) => EXIT_USAGE,
            BenchError::Core(csrecon::Error::InvalidParameter { .. }) => EXIT_USAGE,
            BenchError::Core(csrecon::Error::NonFiniteIterate { .. }) | BenchError::Contract(_) => EXIT_NUMERICAL,
            _ => EXIT_DATA,
        }
    }
}
