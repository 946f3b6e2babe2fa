use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An enumeration would visit more objects than the configured cap.
    #[error("enumeration budget exceeded: {what} needs {count} items (cap {cap})")]
    Budget { what: String, count: u128, cap: u128 },

    #[error("invalid field parameters: {0}")]
    Field(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("inconsistent linear system")]
    Inconsistent,

    #[error("invalid code: {0}")]
    Code(String),

    /// A theorem or construction was asked to run outside its hypotheses.
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
