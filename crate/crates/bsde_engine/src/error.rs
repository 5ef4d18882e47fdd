use risk_closed_forms::ClosedFormError;
use stochastic_core::CoreError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("invalid input `{name}`: {detail}")]
    InvalidInput { name: &'static str, detail: String },
    #[error("conditional event has empirical probability 0")]
    EmptyConditioning,
    #[error("regression basis of degree {degree} is rank deficient at grid index {index}; lower the degree or rescale the state")]
    RankDeficient { degree: usize, index: usize },
    #[error("driver `{0}` must be Lipschitz and Brownian-only for the backward solver")]
    UnsupportedDriver(String),
    #[error("driver `{driver}` violates declared flag {flag}: {detail}")]
    FlagViolation {
        driver: String,
        flag: &'static str,
        detail: String,
    },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("Poisson truncation leaves tail mass {tail:.3e} > 1e-10; increase the truncation level")]
    Truncation { tail: f64 },
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    ClosedForm(#[from] ClosedFormError),
}

pub(crate) fn invalid(name: &'static str, detail: impl Into<String>) -> EngineError {
    EngineError::InvalidInput { name, detail: detail.into() }
}
