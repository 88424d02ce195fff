use thiserror::Error;

/// Errors surfaced by solvers and validated constructors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Quantile argument outside the supported probability band.
    #[error("quantile input p = {p} outside supported range [{lo}, {hi}]")]
    QuantileDomain { p: f64, lo: f64, hi: f64 },

    /// The capacity target cannot be met by any evaluation threshold.
    #[error("infeasible capacity: {0}")]
    InfeasibleCapacity(String),

    /// First-best formulas produced a negative effort; the interior
    /// characterization does not apply to these parameters.
    #[error("corner first best: computed effort {effort} < 0 for theta = {theta}")]
    CornerFirstBest { theta: f64, effort: f64 },

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// A solver failed to converge or hit an internal numerical problem.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// `true` for bad or infeasible input, `false` for internal numerical
    /// failures. The CLI maps the former to exit code 1, the latter to 2.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Numerical(_))
    }
}
