//! Crate-wide error type for rejected inputs and gate failures.

use thiserror::Error;

/// Errors returned by constructors, solvers, and the hypothesis gate.
#[derive(Debug, Error)]
pub enum Error {
    /// A vector or matrix had the wrong dimension for the operation.
    #[error("dimension mismatch in {what}: expected {expected}, got {got}")]
    Dimension {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    /// An input value violated a precondition (non-finite entry, empty set,
    /// out-of-range index, non-unit direction, ...).
    #[error("invalid input: {0}")]
    Input(String),

    /// A derived object collapsed to something unusable, e.g. a common
    /// ordering cone equal to {0} from which no direction can be drawn.
    #[error("degenerate construction: {0}")]
    Degenerate(String),

    /// The instance failed a mandatory hypothesis check before solving.
    #[error("hypothesis check failed: {name} — {details}")]
    Hypothesis { name: String, details: String },

    /// An internal invariant was violated. On valid finite instances this
    /// cannot happen; seeing it means a bug, not bad input.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
