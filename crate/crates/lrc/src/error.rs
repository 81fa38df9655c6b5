//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building fields, running linear
/// algebra, constructing codes, or analyzing them.
#[derive(Debug, Error)]
pub enum Error {
    /// The requested characteristic is not a prime number.
    #[error("{0} is not prime")]
    NotPrime(u64),

    /// The requested order is not of the form p^m.
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    /// The field order exceeds what the element representation supports.
    #[error("field order {p}^{m} is too large")]
    FieldTooLarge { p: u64, m: u32 },

    /// A user-supplied modulus polynomial is unusable.
    #[error("invalid modulus polynomial: {0}")]
    BadModulus(String),

    /// Operands from two different fields were mixed in one operation.
    #[error("operands belong to different fields")]
    FieldMismatch,

    /// An element encoding is outside [0, q).
    #[error("value {0} is out of range for a field of order {1}")]
    ValueOutOfRange(u64, u64),

    /// Division or inversion of zero.
    #[error("division by zero")]
    DivisionByZero,

    /// Shapes of matrix/vector operands do not line up.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A coordinate or vertex index is out of range.
    #[error("index {0} is out of range ({1} entries)")]
    IndexOutOfRange(usize, usize),

    /// A square matrix that had to be invertible was not.
    #[error("matrix is singular")]
    SingularMatrix,

    /// A parameter violates a documented precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An exhaustive search would exceed its enumeration budget.
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    /// Randomized sampling failed verification for every retried seed.
    #[error("sampling failed after {retries} seeds")]
    SamplingFailed { retries: u64 },

    /// Input data contradicts itself (e.g. a word that is not a codeword).
    #[error("inconsistent input: {0}")]
    Integrity(String),

    /// The requested analysis does not apply to this input.
    #[error("not applicable: {0}")]
    NotApplicable(String),

    /// An internal self-check failed; indicates a construction bug.
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}
