use thiserror::Error;

/// Error type shared by all modules in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Input failed a structural precondition (shape, symmetry, range of a
    /// configuration parameter).
    #[error("validation: {0}")]
    Validation(String),

    /// Dimension mismatch between an operand and the space it must live in.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// Normalization requested for a vector with non-positive e-value.
    #[error("normalization: {0}")]
    Normalization(String),

    /// A numeric parameter exceeded the configured working range.
    #[error("numeric range: {0}")]
    Range(String),

    /// A precondition on the state of the computation was violated
    /// (e.g., a vector that must be fixed by a flow is not).
    #[error("precondition: {0}")]
    Precondition(String),

    /// The requested operation is not defined for this generator
    /// (kernel projection requires a skew-adjoint generator).
    #[error("unsupported generator: {0}")]
    UnsupportedGenerator(String),

    /// A validated invariant failed after construction.
    #[error("invariant violation: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
