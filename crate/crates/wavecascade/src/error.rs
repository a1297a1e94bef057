//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// γ computed above one: the x axis must be the longitudinal direction.
    #[error("axis orientation: {0}")]
    AxisOrientation(String),

    /// The fluid layer pinched below the admissibility threshold h0.
    #[error("degenerate geometry: min depth {min_depth:.6e} < h0 {h0:.6e}{}",
            time.map(|t| format!(" at t = {t:.6}")).unwrap_or_default())]
    DegenerateGeometry {
        min_depth: f64,
        h0: f64,
        time: Option<f64>,
    },

    #[error("linear solver failed: residual {residual:.3e} after {iterations} iterations")]
    SolverFailure { residual: f64, iterations: usize },

    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("solution blow-up at t = {time:.6} (max |field| = {max_abs:.3e})")]
    BlowUp { time: f64, max_abs: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error("rate fit failed: {0}")]
    NoFit(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code contract: 1 for configuration errors, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidInput(_) | Error::AxisOrientation(_) => 1,
            _ => 2,
        }
    }
}
