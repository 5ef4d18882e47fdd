use bsde_engine::EngineError;
use resilience_toolkit::ToolkitError;
use risk_closed_forms::ClosedFormError;
use stochastic_core::CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("config: {0}")]
    Config(String),
    #[error("config field `{field}`: {detail}")]
    Field { field: String, detail: String },
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Toolkit(#[from] ToolkitError),
    #[error(transparent)]
    ClosedForm(#[from] ClosedFormError),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("cannot write `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl ScenarioError {
    pub fn is_config(&self) -> bool {
        matches!(self, ScenarioError::Config(_) | ScenarioError::Field { .. })
    }
}

pub(crate) fn field(name: &str, detail: impl Into<String>) -> ScenarioError {
    ScenarioError::Field { field: name.to_string(), detail: detail.into() }
}
