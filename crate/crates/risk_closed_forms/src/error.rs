use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClosedFormError {
    #[error("`{name}` = {value} outside domain: {constraint}")]
    Domain {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },
    #[error("singular at t = T: {0}")]
    Singularity(&'static str),
    #[error("exp(gamma·X) overflows (max gamma·X = {max_exponent:.3e}); reduce gamma or bound X")]
    Scaling { max_exponent: f64 },
    #[error("quadrature did not converge: error estimate {estimate:.3e}")]
    Quadrature { estimate: f64 },
}

pub(crate) fn domain(ok: bool, name: &'static str, value: f64, constraint: &'static str) -> Result<(), ClosedFormError> {
    if ok {
        Ok(())
    } else {
        Err(ClosedFormError::Domain { name, value, constraint })
    }
}
