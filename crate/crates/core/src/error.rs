use thiserror::Error;

use crate::scalar::CoeffMode;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("coefficient modes differ: {left:?} vs {right:?}")]
    ModeMismatch { left: CoeffMode, right: CoeffMode },

    #[error("elements belong to different algebra contexts")]
    ContextMismatch,

    #[error("generator index {index} is outside 1..={n_pairs}")]
    InvalidGenerator { index: u32, n_pairs: u32 },

    #[error("negative exponent {exponent} is not allowed in polynomial mode")]
    NegativeExponentInPolynomialMode { exponent: i64 },

    #[error("reordering q^-1 past p^-1 needs a truncation order")]
    MixedNegativeExact,

    #[error("{0} overflowed")]
    Overflow(&'static str),

    #[error("zero denominator")]
    ZeroDenominator,

    #[error("series has a constant term and cannot be divided by c")]
    NotDivisibleByC,

    #[error("invalid context: {0}")]
    InvalidContext(String),

    #[error("derivative index {index} is outside 1..={n_pairs}")]
    InvalidIndex { index: u32, n_pairs: u32 },

    #[error("multi-index has length {got}, expected {expected}")]
    MultiIndexLength { expected: usize, got: usize },

    #[error("syntax error at {pos}: {message}")]
    Syntax { pos: usize, message: String },

    #[error("index {index} exceeds the number of pairs {n_pairs}")]
    IndexOutOfRange { index: u32, n_pairs: u32 },

    #[error("{0} cannot be raised to a negative power")]
    NegativePower(&'static str),

    #[error("the representation oracle only supports polynomial mode")]
    LaurentModeUnsupported,

    #[error("the representation oracle needs exact (untruncated) coefficients")]
    TruncatedCoefficientsUnsupported,
}
