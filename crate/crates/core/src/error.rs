use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u64),
    #[error("invalid extension degree {0}")]
    InvalidDegree(u32),
    #[error("field of size {p}^{e} is too large")]
    FieldTooLarge { p: u64, e: u32 },
    #[error("modulus {0:?} is reducible over the prime field")]
    ReducibleModulus(Vec<u32>),
    #[error("malformed modulus: {0}")]
    InvalidModulus(String),
    #[error("value {value} is not an element of a field of size {q}")]
    ElementOutOfRange { value: u64, q: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("shape mismatch: expected {expected}, got {found}")]
    ShapeMismatch { expected: String, found: String },
    #[error("vector length {found} does not match ambient dimension {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("subspaces live in different ambient spaces")]
    AmbientMismatch,
    #[error("enumeration of {needed} items exceeds the budget of {budget}")]
    BudgetExceeded { needed: String, budget: u64 },
    #[error("the zero code has no minimum distance")]
    ZeroCode,
    #[error("negative exponent {0}")]
    NegativeExponent(i64),
    #[error("non-integral result: {0}")]
    NonIntegralResult(String),
    #[error("rank table has no entry for subspace \"{0}\"")]
    MissingRank(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
