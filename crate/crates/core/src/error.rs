use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("variable index {index} out of range for arity {arity}")]
    VariableOutOfRange { index: usize, arity: usize },
    #[error("coefficient {0} is not in the requested domain")]
    CoefficientNotInDomain(String),
    #[error("target degree {target} is below the polynomial degree {degree}")]
    DegreeTooSmall { target: u32, degree: u32 },
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("empty generator list")]
    EmptyGenerators,
    #[error("generators are not homogeneous")]
    NonHomogeneous,
    #[error("{what} did not stabilize within degree cap {cap}")]
    NotStabilized { what: String, cap: u32 },
    #[error("bad prime {p}: {reason}")]
    BadPrime { p: u64, reason: String },
    #[error("{what} exceeds cap {cap}")]
    CapExceeded { what: String, cap: u128 },
    #[error("work cap exceeded: {needed} candidates > {cap}")]
    WorkCap { needed: u128, cap: u128 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::HypothesisViolation(_) => 2,
            Error::Inconclusive(_) => 3,
            Error::WorkCap { .. } => 4,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
