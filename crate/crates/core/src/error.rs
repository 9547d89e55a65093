use thiserror::Error;

/// Errors raised by the numeric and symbolic pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The working precision cannot resolve the requested quantity.
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    /// A verification needs more bits than the caller supplied.
    #[error("precision too low: {what}; need at least {required_bits} bits")]
    PrecisionTooLow { what: String, required_bits: usize },

    /// No polynomial root satisfied the admissibility rule.
    #[error("root selection failed: {0}")]
    RootSelection(String),

    /// A defining relation was not met to the required tolerance.
    #[error("{context}: residual 2^{residual_log2:.1} exceeds threshold 2^{threshold_log2}")]
    Residual {
        context: String,
        residual_log2: f64,
        threshold_log2: i64,
    },

    /// The coefficient system is rank deficient for this modulus.
    #[error("degenerate r: coefficient system has rank {rank} with {unknowns} unknowns")]
    Degenerate { rank: usize, unknowns: usize },

    /// The series argument does not lie inside the unit disc.
    #[error("non-convergent series: {0}")]
    NonConvergent(String),

    /// Structural failure in exact arithmetic (division by an exact zero).
    #[error("structural error: {0}")]
    Structural(String),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
