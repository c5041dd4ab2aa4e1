use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("modulus overflow: {0}")]
    PrecisionOverflow(String),
    #[error("degree exhausted: {0}")]
    DegreeExhausted(String),
    #[error("conjugate sum is not in the base ring: {0}")]
    NotRational(String),
    #[error("value is not divisible as required: {0}")]
    NotDivisible(String),
    #[error("incompatible operands: {0}")]
    Mismatch(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
