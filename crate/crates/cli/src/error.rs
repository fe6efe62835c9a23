use std::path::PathBuf;

use thiserror::Error;

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

    #[error("line {line}: cannot parse `{token}` as a number")]
    Parse { line: usize, token: String },

    #[error("line {line}: observation {value} is not a positive finite number")]
    NonPositive { line: usize, value: f64 },

    #[error("need at least 3 observations, found {0}")]
    TooFew(usize),

    #[error(transparent)]
    Core(#[from] bsppcc::Error),
}

impl CliError {
    /// 0 success, 2 usage/I-O/validation, 3 sample size outside the table.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(bsppcc::Error::OutOfRange { .. }) => 3,
            _ => 2,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}
