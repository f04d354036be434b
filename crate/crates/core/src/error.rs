use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index must be a positive integer, got {0}")]
    NonPositiveIndex(i128),
    #[error("index overflow: product exceeds 2^63 - 1")]
    IndexOverflow,
    #[error("character has no value for prime {0}")]
    MissingPrime(u64),
    #[error("character value for prime {prime} is not unimodular (|w| = {modulus})")]
    NotUnimodular { prime: u64, modulus: f64 },
    #[error("prime {0} is beyond the prime-position table")]
    PrimeTooLarge(u64),
    #[error("dimension mismatch: expected at least {expected} coordinates, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("torus dimension {nvars} exceeds the desk-scale guard of {max}")]
    DimensionGuard { nvars: usize, max: usize },
    #[error("invalid exponent p: {0}")]
    InvalidExponent(String),
    #[error("no nonzero multipliers from H_{p} to H_{q}")]
    NoNonzeroMultipliers { p: String, q: String },
    #[error("point outside the open polydisc: |z_{index}| = {modulus}")]
    OutsidePolydisc { index: usize, modulus: f64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("malformed input: {0}")]
    Format(String),
}
