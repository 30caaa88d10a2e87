use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two values with different (p, precision) contexts were combined.
    #[error("p-adic context mismatch: (p={p_left}, N={n_left}) vs (p={p_right}, N={n_right})")]
    ContextMismatch {
        p_left: u64,
        n_left: u32,
        p_right: u64,
        n_right: u32,
    },

    /// Inversion of an element with positive valuation.
    #[error("not a unit: residue is divisible by p")]
    NotAUnit,

    /// An operation that needs a degree was handed the zero polynomial.
    #[error("the zero polynomial is not a valid input here")]
    ZeroPolynomial,

    /// A divisor or modulus that must be distinguished is not.
    #[error("polynomial is not distinguished")]
    NotDistinguished,

    /// A precondition on the mathematical domain was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// Input data that can never arise from a genuine example.
    #[error("inconsistent input: {0}")]
    InconsistentInput(String),

    /// Malformed fixture document.
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },

    /// Well-formed fixture that violates a record invariant.
    #[error("validation error: {0}")]
    Validation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
