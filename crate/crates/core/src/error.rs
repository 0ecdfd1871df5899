use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {message} (offending token: {token:?})")]
    Parse { token: String, message: String },

    #[error("value {0} overflows binary64")]
    FloatOverflow(String),

    #[error("invalid interval: need a < b, got [{a}, {b}]")]
    InvalidInterval { a: String, b: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("coefficient of {bits} bits exceeds the budget of {budget} bits at p = {p}")]
    SizeBudget { bits: u64, budget: u64, p: usize },

    #[error("moment series is identically zero")]
    AllZero,

    #[error("root finder did not converge for {poly} after {iterations} iterations")]
    NoConvergence { poly: String, iterations: usize },

    #[error("point {point} lies within {distance:e} of the branch cut")]
    BranchCut { point: String, distance: f64 },

    #[error("quadrature did not reach tolerance at maximum depth {depth}: achieved error estimate {achieved:e}")]
    QuadratureDepth { depth: usize, achieved: f64 },

    #[error("path endpoints do not match: {0}")]
    EndpointMismatch(String),

    #[error("endpoint {0} lies outside the grid box")]
    OutsideBox(String),

    #[error("no grid path connects the endpoints")]
    NoPath,

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code: 2 for malformed input, 1 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::InvalidInterval { .. } | Error::InvalidArgument(_) | Error::OutsideBox(_) => 2,
            _ => 1,
        }
    }

    pub(crate) fn parse(token: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse { token: token.into(), message: message.into() }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
