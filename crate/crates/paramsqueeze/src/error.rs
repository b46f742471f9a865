use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("Wronskian drifted by {drift:e} at t = {t}")]
    WronskianDrift { t: f64, drift: f64 },

    #[error("step control stalled at t = {t} after {steps} steps")]
    StepLimit { t: f64, steps: usize },

    #[error("Bogoliubov unitarity violated: | |alpha|^2 - |beta|^2 - 1 | = {residual:e}")]
    UnitarityViolation { residual: f64 },

    #[error("operation requires a sine-squared profile")]
    WrongVariant,

    #[error("quadrature did not converge: {detail} (error budget {budget:e})")]
    QuadratureFailure { detail: String, budget: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
