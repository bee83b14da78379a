//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug, Clone)]
pub enum Error {
    #[error("quadrature did not converge: value ~ {value:.6e}, error estimate {error:.3e} after {evaluations} evaluations")]
    NonConvergence {
        value: f64,
        error: f64,
        evaluations: u64,
    },

    #[error("invalid integration domain: [{a}, {b}]")]
    DomainError { a: f64, b: f64 },

    #[error("integrand returned a non-finite value at x = {x}")]
    NonFinite { x: f64 },

    #[error("unsupported dimension {dim} (1..=4 allowed)")]
    DimensionError { dim: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("no sign change found while bracketing: {0}")]
    BracketFailure(String),

    #[error("ODE step size underflow at r = {r} (last good state f = {f})")]
    StepFailure { r: f64, f: f64 },

    #[error("profile lost positivity at r = {r}")]
    PositivityLoss { r: f64 },

    #[error("trajectory too short for diagnostics: spans {efolds:.2} e-folds, need {needed}")]
    InsufficientRange { efolds: f64, needed: f64 },

    #[error("local graph construction failed at r = {r}: {reason}")]
    GraphFailure { r: f64, reason: String },

    #[error("layers {i} and {j} coincide: |a_i - a_j| = {gap:.3e}")]
    CoincidentLayers { i: usize, j: usize, gap: f64 },

    #[error("layer ordering violated and could not be restored by step halving")]
    OrderingViolation,

    #[error("relaxation diverged after {iters} iterations (residual grew 3 consecutive steps)")]
    Divergence { iters: usize },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("usage error: {0}")]
    Usage(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
