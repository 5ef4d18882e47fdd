use bsde_engine::EngineError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ToolkitError {
    #[error("invalid input `{name}`: {detail}")]
    InvalidInput { name: &'static str, detail: String },
    #[error("rate is undefined: {0}")]
    UndefinedRate(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

pub(crate) fn invalid(name: &'static str, detail: impl Into<String>) -> ToolkitError {
    ToolkitError::InvalidInput { name, detail: detail.into() }
}
