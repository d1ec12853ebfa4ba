use thiserror::Error;

/// Errors produced by this crate.
///
/// `Argument` means the caller handed over something malformed (length
/// mismatch, negative probability, empty population). `Precondition` means
/// the inputs are well-formed but violate a hypothesis of the bound being
/// computed (e.g. `M <= Delta/delta`, or `b` beyond the admissible window),
/// so the bound simply does not apply.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("precondition rejected: {0}")]
    Precondition(String),
}

impl Error {
    pub fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// Short machine-readable kind, used by the CLI error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Argument(_) => "argument",
            Error::Precondition(_) => "precondition",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
