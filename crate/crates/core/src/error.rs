use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("{0} is not divisible by q - 1")]
    NotDivisible(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a Laurent polynomial in q")]
    NotInL(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("zero input has no weight")]
    ZeroInput,
    #[error("specification failed validation: {}", .0.join("; "))]
    InvalidSpec(Vec<String>),
    #[error("ambiguous pivot at step {j}: candidates {candidates:?}")]
    AmbiguousPivot { j: usize, candidates: Vec<usize> },
    #[error("bracket of y{i} and y{j} is not a scalar multiple of y{i}*y{j}")]
    NotLogCanonical { i: usize, j: usize },
    #[error("expected a single monomial for {0}")]
    NotAMonomial(String),
    #[error("torus element lies outside the Ore subalgebra: {0}")]
    NotInSubalgebra(String),
    #[error("coefficient outside Q[q, q^-1]: {0}")]
    CoefficientNotInL(String),
    #[error("support violation: {0}")]
    SupportViolation(String),
    #[error("quantum pivot disagrees with the Poisson pivot at step {j}: {detail}")]
    PivotMismatch { j: usize, detail: String },
    #[error("Y{i} and Y{j} do not q-commute by an integral power of q")]
    NonIntegralCommutation { i: usize, j: usize },
    #[error("peeling exceeded the cap of {cap} steps")]
    CapExceeded { cap: usize },
    #[error("epsilon must evaluate to 1 at q = 1, got {0}")]
    BadEpsilon(String),
    #[error("identity failed: {0}")]
    IdentityFailed(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CapExceeded { .. } => 3,
            Error::Parse(_)
            | Error::InvalidSpec(_)
            | Error::LengthMismatch { .. }
            | Error::BadEpsilon(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
