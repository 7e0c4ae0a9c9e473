use thiserror::Error;

/// Every failure the numerical pipeline can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{key}`: {reason}")]
    InvalidParameter { key: &'static str, reason: String },

    #[error("potential evaluated at r = {0}; requires r > 0")]
    DomainError(f64),

    #[error("no sign change of the shooting classification on U(0) in [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },

    #[error("ODE integration produced a non-finite value at r = {0}")]
    StiffFailure(f64),

    #[error("beta = {beta} must be below alpha/(2 pi) = {limit}")]
    BetaTooLarge { beta: f64, limit: f64 },

    #[error("interaction ratio did not stabilize before d = {0}")]
    NoPlateau(f64),

    #[error("maximum at bracket endpoint (bracket [{lo}, {hi}], argmax {at})")]
    NoInteriorMax { lo: f64, hi: f64, at: f64 },

    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error("Krylov solver stalled after {iterations} iterations (relative residual {residual:.3e})")]
    KrylovStall { iterations: usize, residual: f64 },

    #[error("fixed-point iteration does not contract (ratios {0:?})")]
    NoContraction(Vec<f64>),

    #[error("Newton polish left sup residual {0:.3e}")]
    NewtonFailure(f64),

    #[error("multiplier b = {b:.3e} at the optimum exceeds {limit:.1e}")]
    MultiplierNotSmall { b: f64, limit: f64 },

    #[error("shifted operator is singular at shift {0}")]
    ShiftSingular(f64),

    #[error("ball (center {center:?}, radius {radius}) leaves the grid")]
    BallOutsideGrid { center: [f64; 2], radius: f64 },

    #[error("two-ring construction needs dim >= 4, got {0}")]
    DimensionError(usize),

    #[error("cache I/O: {0}")]
    Io(#[from] std::io::Error),

    #[error("cache format: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Format(e.to_string())
    }
}
