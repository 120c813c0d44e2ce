use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Caller-side misuse such as mismatched grids or bad parameters.
    #[error("usage error: {0}")]
    Usage(String),
    /// A series or iteration failed to converge within its budget.
    #[error("{function} did not converge after {terms} terms (last term magnitude {last_term:e})")]
    NonConvergence {
        function: &'static str,
        terms: usize,
        last_term: f64,
    },
    /// The autocorrelation fell below the orthonormalization threshold.
    #[error("autocorrelation {value:e} below threshold {threshold:e} at omega = {omega}")]
    Degenerate {
        omega: f64,
        value: f64,
        threshold: f64,
    },
    /// Serialization or parsing failure.
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Format(e.to_string())
    }
}
