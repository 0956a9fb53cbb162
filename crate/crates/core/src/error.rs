use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    /// The factor builder hit an internal inconsistency or numerical drift.
    #[error("construction failure at level {level}: {message}")]
    Construction { level: usize, message: String },

    #[error("resource budget exceeded: {0}")]
    Resource(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("oracle failure: {0}")]
    Oracle(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn construction(level: usize, msg: impl Into<String>) -> Self {
        Error::Construction {
            level,
            message: msg.into(),
        }
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}
