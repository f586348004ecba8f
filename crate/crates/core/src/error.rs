use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("unknown RK scheme `{0}` (expected one of ssp33, ssp33s, ssp54, ssp54s)")]
    UnknownScheme(String),

    #[error("invalid grid: {0}")]
    InvalidDimension(String),

    #[error("invalid reconstruction input: {0}")]
    InvalidStencil(String),

    #[error("non-hyperbolic state at x = {x}: {reason}")]
    NonHyperbolic { x: f64, reason: String },

    #[error("degenerate problem: all wave speeds vanish")]
    DegenerateWaveSpeed,

    #[error("singular boundary system on the {side} side: {detail}")]
    SingularBoundary { side: &'static str, detail: String },

    #[error("boundary Newton solve did not converge on the {side} side after {iterations} iterations (residual {residual:e})")]
    NewtonDiverged { side: &'static str, iterations: usize, residual: f64 },

    #[error("missing boundary data for stage {stage} (stages 0..{stage} must be computed first)")]
    MissingStage { stage: usize },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("solution blew up at t = {time} (point x = {x})")]
    Blowup { time: f64, x: f64 },

    #[error("problem evaluation outside its validity range: {0}")]
    OutOfRange(String),

    #[error("{0}")]
    Config(String),

    #[error("csv: {0}")]
    Csv(String),
}

pub type Result<T> = std::result::Result<T, SolverError>;

impl SolverError {
    /// Failures caused by the numerical solution itself (instability),
    /// as opposed to bad input.
    pub fn is_numerical_failure(&self) -> bool {
        matches!(
            self,
            SolverError::NonHyperbolic { .. }
                | SolverError::DegenerateWaveSpeed
                | SolverError::SingularBoundary { .. }
                | SolverError::NewtonDiverged { .. }
                | SolverError::Blowup { .. }
        )
    }
}
