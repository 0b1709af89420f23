use thiserror::Error;

/// Errors surfaced by the exact-arithmetic layers.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum AffError {
    /// A precondition on the inputs was violated.
    #[error("domain error: {0}")]
    Domain(String),
    /// A hypothesis of a theorem-level check failed; the check is skipped,
    /// not failed.
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
    /// A deterministic search ran out of budget.
    #[error("not found: {0}")]
    NotFound(String),
    /// An internal consistency assertion failed. This indicates a bug.
    #[error("internal error: {0}")]
    Internal(String),
    /// Failed to parse a textual input.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, AffError>;
