use thiserror::Error;

/// Errors raised anywhere in the laboratory.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Invalid user-supplied configuration (distribution spec, shell, missing params).
    #[error("configuration error: {0}")]
    Config(String),

    /// Argument outside the domain of a function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Numerical failure (non-convergence, non-finite input, step underflow).
    #[error("numeric error: {0}")]
    Numeric(String),

    /// A rejection sampler exhausted its budget.
    #[error("sampling error: {message} (acceptance rate {acceptance_rate:.3e})")]
    Sampling {
        message: String,
        acceptance_rate: f64,
    },

    /// A reference oracle failed its self-convergence check.
    #[error("oracle error: {0}")]
    Oracle(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
