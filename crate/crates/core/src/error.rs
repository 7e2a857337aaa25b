use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Kendall's tau is undefined when one of the series is constant.
    #[error("undefined correlation: {0}")]
    UndefinedCorrelation(String),

    #[error("{experiment}: sweep point {index} (value {value}): {source}")]
    AtPoint {
        experiment: String,
        index: usize,
        value: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by bad user input rather than runtime failures.
    pub fn is_usage(&self) -> bool {
        match self {
            Error::Config(_) | Error::InvalidParameter(_) => true,
            Error::AtPoint { source, .. } => source.is_usage(),
            _ => false,
        }
    }
}
