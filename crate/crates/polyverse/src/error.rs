use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An index was outside the finite set it was supposed to address.
    #[error("index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    /// Two structures that had to agree on shape did not.
    #[error("shape mismatch: {context}")]
    ShapeMismatch { context: String },

    /// A construction would exceed the configured position bound.
    #[error("overflow: {context}")]
    Overflow { context: String },

    /// A universe operation produced a code above the universe cap.
    #[error("cap {cap} exceeded at position {position}")]
    CapExceeded { cap: usize, position: usize },

    /// A lens was applied at a position where it is undefined (cap truncation).
    #[error("lens undefined at position {position}")]
    Undefined { position: usize },

    /// A stated hypothesis of an operation does not hold for the given data.
    #[error("precondition failed: {context}")]
    PreconditionFailed { context: String },

    /// A bounded exhaustive search ran out of budget before deciding.
    #[error("search exhausted: {context}")]
    SearchExhausted { context: String },
}

pub type Result<T> = std::result::Result<T, Error>;
