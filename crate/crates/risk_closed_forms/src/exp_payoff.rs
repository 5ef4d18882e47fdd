use crate::error::domain;
use crate::Result;

/// Claim `exp(σ·W_T)` on a GBM asset with constant drift and volatility.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpPayoffSpec {
    pub mu: f64,
    pub sigma: f64,
    pub horizon: f64,
}

impl ExpPayoffSpec {
    fn check(&self, t: f64) -> Result<()> {
        domain(self.sigma != 0.0, "sigma", self.sigma, "must be non-zero")?;
        domain(t >= 0.0 && t < self.horizon, "t", t, "must lie in [0, T)")
    }
}

/// Rate of the closed form scaled by `e^{μ²T/(2σ²)}`: `μ·exp((μ²/σ² + σ²)T/2 − μ(T−t))`.
pub fn exp_payoff_rate(spec: &ExpPayoffSpec, t: f64) -> Result<f64> {
    spec.check(t)?;
    let (m, s, big_t) = (spec.mu, spec.sigma, spec.horizon);
    Ok(m * (0.5 * (m * m / (s * s) + s * s) * big_t - m * (big_t - t)).exp())
}

/// Volatility exposure of the scaled closed form, `σ·exp(σw + μ²T/(2σ²) + (σ²/2 − μ)(T−t))` at `W_t = w`.
pub fn exp_payoff_z_scaled(spec: &ExpPayoffSpec, t: f64, w: f64) -> f64 {
    let (m, s, big_t) = (spec.mu, spec.sigma, spec.horizon);
    s * (s * w + m * m * big_t / (2.0 * s * s) + (0.5 * s * s - m) * (big_t - t)).exp()
}

/// Replicating value `exp(σw + (σ²/2 − μ)(T−t))`, which solves the linear BSDE with terminal `exp(σW_T)`.
pub fn exp_payoff_value(spec: &ExpPayoffSpec, t: f64, w: f64) -> f64 {
    let s = spec.sigma;
    (s * w + (0.5 * s * s - spec.mu) * (spec.horizon - t)).exp()
}

pub fn exp_payoff_z(spec: &ExpPayoffSpec, t: f64, w: f64) -> f64 {
    spec.sigma * exp_payoff_value(spec, t, w)
}

/// Rate of the replicating value: `μ·exp(σ²T/2 − μ(T−t))`.
pub fn exp_payoff_rate_replicating(spec: &ExpPayoffSpec, t: f64) -> Result<f64> {
    spec.check(t)?;
    let (m, s) = (spec.mu, spec.sigma);
    Ok(m * (0.5 * s * s * spec.horizon - m * (spec.horizon - t)).exp())
}
