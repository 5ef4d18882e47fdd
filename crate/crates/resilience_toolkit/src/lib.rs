//! Acceptance sets defined by resilience-rate levels, rate curves, the
//! resilience-neutral driver and the resilience risk adjustment (RRA).

mod acceptance;
mod curve;
mod error;
mod neutral;
mod rra;

pub use acceptance::{
    acceptance_family_properties, is_acceptable, min_acceptance_level, AcceptanceLevel, AcceptanceQuery, Confidence,
    FamilyReport, FamilyRow, Membership,
};
pub use curve::RateCurve;
pub use error::ToolkitError;
pub use neutral::{neutral_solution, resilience_neutral_driver, NeutralizedDriver};
pub use rra::{
    adjusted_risk_expansion_check, adjusted_risk_paths, expansion_check_exact, rra, ExpansionReport, Rescale,
};

pub type Result<T> = std::result::Result<T, ToolkitError>;
