//! Error type shared by every operation in the crate.

/// Errors surfaced by classification, enumeration and parsing operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// An agent or object index is outside the instance shape.
    #[error("index out of range: {0}")]
    Index(String),

    /// The inputs are well-formed but the operation is undefined on them
    /// (empty object set, zero weight row, non-permutation axis, ...).
    #[error("{0}")]
    Domain(String),

    /// A data-dependent precondition does not hold (e.g. a cycle deal whose
    /// transfers are not owned by the designated agents).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Text input could not be parsed; the message names the offending token.
    #[error("parse error: {0}")]
    Parse(String),

    /// An exhaustive computation would exceed the configured budget.
    #[error("capacity exceeded: {required} states needed, budget is {budget}")]
    Capacity { required: u128, budget: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
