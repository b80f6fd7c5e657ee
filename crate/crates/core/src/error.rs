use thiserror::Error;

/// Errors raised by the library. Verdict-valued operations (witness
/// verification, refutations) report their outcome in the return value and
/// only use this type for malformed input or exhausted resources.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("capacity exceeded: {what} (bound {bound})")]
    Capacity { what: String, bound: u64 },

    #[error("precision exhausted at index {index}: {detail}")]
    Precision { index: u64, detail: String },

    #[error("empty set: {0}")]
    EmptySet(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("simplex stalled after {iterations} iterations")]
    SolverStall { iterations: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn capacity(what: impl Into<String>, bound: u64) -> Self {
        Error::Capacity {
            what: what.into(),
            bound,
        }
    }

    pub(crate) fn precision(index: u64, detail: impl Into<String>) -> Self {
        Error::Precision {
            index,
            detail: detail.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
