use crate::error::domain;
use crate::quadrature::gaussian_expectation;
use crate::{normal, ClosedFormError, Result};

const QUAD_TOL: f64 = 1e-8;

/// European put on a GBM asset with physical drift `mu`, priced at zero rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BsPutSpec {
    pub s0: f64,
    pub strike: f64,
    pub mu: f64,
    pub sigma: f64,
    pub horizon: f64,
}

impl BsPutSpec {
    fn check(&self, t: f64) -> Result<()> {
        domain(self.s0 > 0.0, "s0", self.s0, "must be > 0")?;
        domain(self.strike > 0.0, "strike", self.strike, "must be > 0")?;
        domain(self.sigma > 0.0, "sigma", self.sigma, "must be > 0")?;
        domain((0.0..=self.horizon).contains(&t), "t", t, "must lie in [0, T]")
    }

    /// Asset value at `t` for standard normal score `z` under the physical measure.
    pub fn asset_at(&self, t: f64, z: f64) -> f64 {
        self.s0 * ((self.mu - 0.5 * self.sigma * self.sigma) * t + self.sigma * t.sqrt() * z).exp()
    }

    pub fn d_plus(&self, t: f64, s: f64) -> f64 {
        let sd = self.sigma * (self.horizon - t).sqrt();
        ((s / self.strike).ln() + 0.5 * sd * sd) / sd
    }
}

/// Black put `K·N(−d₋) − F·N(−d₊)` with total standard deviation `sd`.
pub fn black_put(forward: f64, strike: f64, sd: f64) -> f64 {
    if sd <= 0.0 {
        return (strike - forward).max(0.0);
    }
    let d_plus = ((forward / strike).ln() + 0.5 * sd * sd) / sd;
    strike * normal::cdf(-(d_plus - sd)) - forward * normal::cdf(-d_plus)
}

pub fn bs_put_price(spec: &BsPutSpec, t: f64, s: f64) -> Result<f64> {
    spec.check(t)?;
    domain(s > 0.0, "s", s, "must be > 0")?;
    Ok(black_put(s, spec.strike, spec.sigma * (spec.horizon - t).max(0.0).sqrt()))
}

/// Replicating volatility exposure `Z = σ·s·∂ₛV = −σ·s·N(−d₊)`.
pub fn bs_put_z(spec: &BsPutSpec, t: f64, s: f64) -> f64 {
    if t >= spec.horizon {
        return if s < spec.strike { -spec.sigma * s } else { 0.0 };
    }
    -spec.sigma * s * normal::cdf(-spec.d_plus(t, s))
}

/// `−μ·E[S_t·N(−d₊(t, S_t))]` by adaptive quadrature over the lognormal law of `S_t`.
pub fn bs_put_rate_t(spec: &BsPutSpec, t: f64) -> Result<f64> {
    spec.check(t)?;
    if t >= spec.horizon {
        return Err(ClosedFormError::Singularity("put rate is undefined at maturity"));
    }
    if spec.mu == 0.0 {
        return Ok(0.0);
    }
    if t == 0.0 {
        return Ok(-spec.mu * spec.s0 * normal::cdf(-spec.d_plus(0.0, spec.s0)));
    }
    let e = gaussian_expectation(
        |z| {
            let s = spec.asset_at(t, z);
            s * normal::cdf(-spec.d_plus(t, s))
        },
        QUAD_TOL,
    )?;
    Ok(-spec.mu * e)
}

/// `E[V_t]`, the mean put value at `t` under the physical measure.
pub fn bs_put_mean_price(spec: &BsPutSpec, t: f64) -> Result<f64> {
    spec.check(t)?;
    if t == 0.0 {
        return bs_put_price(spec, 0.0, spec.s0);
    }
    let sd = spec.sigma * (spec.horizon - t).sqrt();
    gaussian_expectation(|z| black_put(spec.asset_at(t, z), spec.strike, sd), QUAD_TOL)
}
