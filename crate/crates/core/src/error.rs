use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NonPrimeP(u64),
    #[error("extension degree must be at least 1")]
    ZeroExtensionDegree,
    #[error("field size {0} is out of the supported range")]
    FieldTooLarge(String),
    #[error("polynomials live over different fields")]
    FieldMismatch,
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("the zero polynomial has no factorization")]
    ZeroPolynomial,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("elements belong to different instances")]
    InstanceMismatch,
    #[error("only counts are available here: {0}")]
    CountOnly(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("degenerate sequence: {0}")]
    DegenerateSequence(String),
    #[error("instance does not satisfy a classical prime number theorem: {0}")]
    NonClassicalInstance(String),
    #[error("observable and system do not match: {0}")]
    DomainMismatch(String),
    #[error("average over an empty set")]
    EmptySet,
    #[error("construction is infeasible at this scale: {0}")]
    InfeasibleScale(String),
    #[error("not enough primes of degree {degree}: need {needed}, have {available}")]
    InsufficientPrimes {
        degree: usize,
        needed: String,
        available: String,
    },
    #[error("sets differ in their count of elements of degree {0}")]
    DegreeMismatchSets(usize),
    #[error("norm base is not an integer; exact norms unavailable")]
    NonIntegerBase,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
