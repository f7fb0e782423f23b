use num_bigint::BigUint;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a supported prime (primes up to 97 are accepted)")]
    InvalidPrime(u32),

    #[error("entry {value} is out of range for F_{p}")]
    EntryOutOfRange { value: u32, p: u32 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("prime mismatch: F_{0} vs F_{1}")]
    PrimeMismatch(u32, u32),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("computation needs {order} group elements but the cap is {cap}")]
    CapExceeded { order: BigUint, cap: BigUint },

    #[error("quadratic form has a nonzero bilinear radical")]
    DegenerateForm,

    #[error("the zero form has no standard reduction")]
    ZeroForm,

    #[error("standard form {kind} needs an {expected} number of variables, got {m}")]
    ParityMismatch {
        kind: &'static str,
        expected: &'static str,
        m: usize,
    },

    #[error("witness search is limited to at most 4 variables, got {0}")]
    WitnessSearchCapExceeded(usize),

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("expected {expected} components, found {found}")]
    Arity { expected: usize, found: usize },

    #[error("intersection orbit product is not well defined: {0}")]
    WellDefinednessViolation(String),

    #[error("invalid twisting map: {0}")]
    InvalidTwisting(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn cap(order: impl Into<BigUint>, cap: impl Into<BigUint>) -> Self {
        Error::CapExceeded {
            order: order.into(),
            cap: cap.into(),
        }
    }
}
