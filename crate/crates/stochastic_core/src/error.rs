use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    #[error("invalid parameter `{name}` = {value}: {constraint}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },
    #[error("empty path ensemble")]
    EmptyEnsemble,
    #[error("grid mismatch: expected {expected} steps, found {found}")]
    GridMismatch { expected: usize, found: usize },
}

pub(crate) fn require(ok: bool, name: &'static str, value: f64, constraint: &'static str) -> Result<(), CoreError> {
    if ok {
        Ok(())
    } else {
        Err(CoreError::InvalidParameter { name, value, constraint })
    }
}
