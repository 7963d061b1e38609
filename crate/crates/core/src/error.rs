use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("config parse error: {0}")]
    Parse(String),

    #[error("invalid config field `{field}`: {message}")]
    Config { field: &'static str, message: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular channel: condition number {cond:e} exceeds limit")]
    SingularChannel { cond: f64 },

    #[error("piloting overhead {omega} symbols/s is not below the downlink budget {budget} symbols/s")]
    OverheadExceedsBudget { omega: f64, budget: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("too many rejected drops: {rejected} of {total}")]
    TooManyRejections { rejected: usize, total: usize },

    #[error("internal error: {0}")]
    Internal(String),

    #[error("I/O error at {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(field: &'static str, message: impl Into<String>) -> Self {
        Error::Config {
            field,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
