use thiserror::Error;

/// Errors raised across the crate.
///
/// [`Error::is_numeric`] separates numerical failures (too few usable
/// samples, non-convergence) from malformed input.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("negative exponent at position {0}")]
    NegativeExponent(usize),
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("variable index {index} out of range for arity {arity}")]
    IndexOutOfRange { index: usize, arity: usize },
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("polynomial must be univariate (arity 1), got arity {0}")]
    NotUnivariate(usize),
    #[error("polynomial has degree 0 in the eliminated variable")]
    DegreeZeroInLastVariable,
    #[error("invalid interval: {0}")]
    InvalidInterval(String),
    #[error("endpoint {0} is a root; perturb the interval")]
    EndpointIsRoot(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("set is empty")]
    EmptySet,
    #[error("set is not closed: {0}")]
    NotClosed(String),
    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
}

impl Error {
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::InsufficientSamples(_) | Error::Numeric(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
