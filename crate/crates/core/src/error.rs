use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty input set")]
    Empty,

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("point {index} is not in the open simplex: {reason}")]
    NotInSimplex { index: usize, reason: String },

    #[error("matrix is not symmetric positive-definite: {0}")]
    NotSpd(String),

    #[error("no convergence after {iterations} iterations (gap {gap:e})")]
    NoConvergence { iterations: usize, gap: f64 },

    #[error("bisection bracket does not enclose the root: s(lo) = {s_lo:e}, s(hi) = {s_hi:e}")]
    Bracket { s_lo: f64, s_hi: f64 },

    /// Any other floating-point failure (non-finite values, step underflow).
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    /// Numerical failures (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NoConvergence { .. } | Error::Bracket { .. } | Error::Numerical(_))
    }
}
