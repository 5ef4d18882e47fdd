//! End-to-end scenarios: each one simulates a model, computes resilience
//! rates by closed form, driver expectation and finite difference, and
//! reports CSV tables, a plot spec and pass/fail checks. The suites module
//! bundles the cross-cutting property, neutrality and oracle checks.

mod common;
pub mod config;
mod error;
pub mod report;
pub mod scenarios;
pub mod suites;

pub use config::{load_config, ScenarioConfig, ScenarioId, ScenarioParams};
pub use error::ScenarioError;
pub use report::{Check, ScenarioReport};
pub use suites::SuiteReport;

pub type Result<T> = std::result::Result<T, ScenarioError>;

/// Multiplier on the standard-error bands used by every check.
pub const BASE_SE_BAND: f64 = 4.0;

/// Validates `cfg` and runs its scenario; `tolerance_scale` widens every acceptance band.
pub fn run_scenario(cfg: &ScenarioConfig, tolerance_scale: f64) -> Result<ScenarioReport> {
    if !(tolerance_scale.is_finite() && tolerance_scale > 0.0) {
        return Err(ScenarioError::Config(format!("tolerance scale must be > 0, got {tolerance_scale}")));
    }
    cfg.validate()?;
    let k = BASE_SE_BAND * tolerance_scale;
    use scenarios::*;
    match &cfg.params {
        ScenarioParams::Fig1Put(p) => fig1::run(cfg, p, k, tolerance_scale),
        ScenarioParams::Fig2Vasicek(p) => fig2::run(cfg, p, k, tolerance_scale),
        ScenarioParams::AppC1ExpPayoff(p) => appc1::run(cfg, p, k),
        ScenarioParams::AppDSweep(p) => appd::run(cfg, p, k),
        ScenarioParams::Ex53Ambiguous(p) => ex53::run(cfg, p, k),
        ScenarioParams::Ex54EntropicBrownian(p) => ex54::run(cfg, p, k),
        ScenarioParams::Ex55Martingale(p) => ex55::run(cfg, p, k),
        ScenarioParams::Ex56JumpCall(p) => ex56::run(cfg, p, k),
        ScenarioParams::Ex37EntropicJump(p) => ex37::run(cfg, p, k),
    }
}

/// `(id, description)` for every built-in scenario.
pub fn list_scenarios() -> Vec<(&'static str, &'static str)> {
    ScenarioId::ALL.iter().map(|id| (id.as_str(), id.description())).collect()
}
