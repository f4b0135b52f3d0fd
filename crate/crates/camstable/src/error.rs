use thiserror::Error;

/// Errors across the toolkit. Domain/configuration problems map to CLI exit
/// code 2, numerical failures to exit code 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("Gaussian-attraction regime, unsupported: nu = {nu:.6} >= 1/2")]
    GaussianAttraction { nu: f64 },

    #[error("no stationary mean: nu = {nu:.6} <= 0")]
    NoStationaryMean { nu: f64 },

    #[error("condition A violated: Delta/eps = {ratio:.3} < {min:.1}")]
    ConditionA { ratio: f64, min: f64 },

    #[error("condition B violated: N_Y = {n_y} < {min}")]
    ConditionB { n_y: usize, min: usize },

    #[error("step size too large: {0}")]
    StepSize(String),

    #[error("quadrature failed to converge: {0}")]
    Quadrature(String),

    #[error("insufficient tail samples: {got} beyond threshold, need at least {need}")]
    InsufficientTailSamples { got: usize, need: usize },

    #[error("scale-fit objective has multiple local minima beyond tolerance")]
    NonUnimodalFit,

    #[error("Marcus flow left the domain: {0}")]
    DomainExit(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// CLI exit code for this error: 2 for domain/config, 3 for numerical.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Quadrature(_) | Error::NonUnimodalFit | Error::DomainExit(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
