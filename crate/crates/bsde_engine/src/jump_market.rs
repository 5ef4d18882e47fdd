use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use rayon::prelude::*;
use risk_closed_forms::{normal, poisson_weights};
use stochastic_core::rng::path_rng;
use stochastic_core::stats::{neumaier_sum, MeanSe};

use crate::error::invalid;
use crate::{EngineError, Instant, Method, RateEstimate, Result};

/// European call on `S_T = s0·exp((μ − σ²/2)T + σW_T)·(1+γ)^{N_T}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpCallSpec {
    pub s0: f64,
    pub strike: f64,
    pub mu: f64,
    pub sigma: f64,
    pub jump_gamma: f64,
    pub jump_rate: f64,
    pub horizon: f64,
}

impl JumpCallSpec {
    fn validate(&self, t: f64) -> Result<()> {
        if !(self.s0 > 0.0 && self.strike > 0.0 && self.sigma > 0.0 && self.horizon > 0.0) {
            return Err(invalid("spec", "need s0, strike, sigma, horizon > 0"));
        }
        if !(self.jump_gamma > -1.0) || !(self.jump_rate >= 0.0) {
            return Err(invalid("spec", "need jump_gamma > -1 and jump_rate >= 0"));
        }
        if !(0.0..self.horizon).contains(&t) {
            return Err(invalid("t", "must lie in [0, T)"));
        }
        Ok(())
    }

    pub fn terminal(&self, w_t: f64, n_t: u64) -> f64 {
        let s = self.sigma;
        self.s0 * ((self.mu - 0.5 * s * s) * self.horizon + s * w_t).exp() * (1.0 + self.jump_gamma).powi(n_t as i32)
    }

    fn theta(&self) -> f64 {
        self.mu / self.sigma
    }
}

/// Monte Carlo over `(W_t, W_T − W_t, N_T)`, one stream per path.
pub fn jump_market_rate(spec: &JumpCallSpec, t: f64, n_paths: usize, seed: u64) -> Result<RateEstimate> {
    spec.validate(t)?;
    if n_paths < 2 {
        return Err(invalid("n_paths", "need at least 2"));
    }
    let theta = spec.theta();
    let tau = spec.horizon - t;
    let lead = spec.mu * (-0.5 * theta * theta * tau).exp();
    let poisson = if spec.jump_rate > 0.0 {
        Some(Poisson::new(spec.jump_rate * spec.horizon).map_err(|e| invalid("jump_rate", e.to_string()))?)
    } else {
        None
    };
    let samples: Vec<f64> = (0..n_paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = path_rng(seed, i as u64);
            let a: f64 = rng.sample(StandardNormal);
            let b: f64 = rng.sample(StandardNormal);
            let n = poisson.map_or(0, |p| p.sample(&mut rng) as u64);
            let inc = b * tau.sqrt();
            let s_t = spec.terminal(a * t.sqrt() + inc, n);
            if s_t >= spec.strike {
                lead * (-theta * inc).exp() * s_t
            } else {
                0.0
            }
        })
        .collect();
    let m = MeanSe::of(&samples);
    Ok(RateEstimate {
        value: m.mean,
        std_error: m.se,
        method: Method::DriverExpectation,
        instant: Instant::Time(t),
        epsilons: Vec::new(),
        extrapolation: None,
        n_samples: m.n,
        hit_probability: None,
    })
}

/// Deterministic evaluation by Poisson summation over `N_T` up to `max_jumps`.
pub fn jump_market_rate_series(spec: &JumpCallSpec, t: f64, max_jumps: usize) -> Result<f64> {
    spec.validate(t)?;
    let w = poisson_weights(spec.jump_rate * spec.horizon, max_jumps);
    let tail = (1.0 - neumaier_sum(w.iter().copied())).max(0.0);
    if tail > 1e-10 {
        return Err(EngineError::Truncation { tail });
    }
    let s = spec.sigma;
    let m = -spec.theta() * (spec.horizon - t);
    let v = spec.horizon;
    let drift = (spec.mu - 0.5 * s * s) * spec.horizon;
    let scale = spec.s0 * (drift + s * m + 0.5 * s * s * v).exp();
    let terms = w.iter().enumerate().map(|(n, p)| {
        if *p == 0.0 {
            return 0.0;
        }
        let jump = (1.0 + spec.jump_gamma).powi(n as i32);
        let level = ((spec.strike / spec.s0).ln() - drift - (n as f64) * (1.0 + spec.jump_gamma).ln()) / s;
        p * jump * normal::cdf((m + s * v - level) / v.sqrt())
    });
    Ok(spec.mu * scale * neumaier_sum(terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use risk_closed_forms::quadrature::{gaussian_expectation, integrate};

    fn spec() -> JumpCallSpec {
        JumpCallSpec { s0: 1.0, strike: 1.0, mu: 0.1, sigma: 0.2, jump_gamma: -0.1, jump_rate: 2.0, horizon: 1.0 }
    }

    #[test]
    fn zero_drift_is_zero() {
        let sp = JumpCallSpec { mu: 0.0, ..spec() };
        assert_eq!(jump_market_rate_series(&sp, 0.3, 60).unwrap(), 0.0);
        assert_eq!(jump_market_rate(&sp, 0.3, 100, 1).unwrap().value, 0.0);
    }

    #[test]
    fn no_jump_reduction_matches_quadrature() {
        let sp = JumpCallSpec { jump_gamma: 0.0, ..spec() };
        let t = 0.4;
        let (theta, tau) = (sp.mu / sp.sigma, sp.horizon - t);
        // Integrate over b = (W_T − W_t)/√τ from the exercise boundary upward, Girsanov weight explicit.
        let inner = |a: f64| {
            let w_t = a * t.sqrt();
            let boundary = ((sp.strike / sp.s0).ln() - (sp.mu - 0.5 * sp.sigma * sp.sigma) * sp.horizon) / sp.sigma;
            let b_lo = (boundary - w_t) / tau.sqrt();
            let f = |b: f64| {
                let inc = b * tau.sqrt();
                (-theta * inc - 0.5 * theta * theta * tau).exp() * sp.terminal(w_t + inc, 0) * normal::pdf(b)
            };
            if b_lo >= 12.0 {
                0.0
            } else {
                integrate(f, b_lo.max(-12.0), 12.0, 1e-12, 0.0).unwrap()
            }
        };
        let quad = sp.mu * gaussian_expectation(inner, 1e-10).unwrap();
        let series = jump_market_rate_series(&sp, t, 40).unwrap();
        assert!((quad - series).abs() < 1e-8 * series.abs(), "{quad} vs {series}");
        let mc = jump_market_rate(&sp, t, 200_000, 7).unwrap();
        assert!(mc.within(quad, 4.0), "{} ± {} vs {quad}", mc.value, mc.std_error);
    }

    #[test]
    fn no_intensity_equals_no_jumps() {
        let a = JumpCallSpec { jump_rate: 0.0, ..spec() };
        let b = JumpCallSpec { jump_rate: 0.0, jump_gamma: 0.0, ..spec() };
        assert_eq!(jump_market_rate_series(&a, 0.2, 10).unwrap(), jump_market_rate_series(&b, 0.2, 10).unwrap());
        assert_eq!(jump_market_rate(&a, 0.2, 1000, 3).unwrap(), jump_market_rate(&b, 0.2, 1000, 3).unwrap());
    }

    #[test]
    fn series_matches_monte_carlo_with_jumps() {
        let sp = spec();
        let series = jump_market_rate_series(&sp, 0.5, 60).unwrap();
        let mc = jump_market_rate(&sp, 0.5, 200_000, 11).unwrap();
        assert!(mc.within(series, 4.0), "{} ± {} vs {series}", mc.value, mc.std_error);
    }

    #[test]
    fn short_truncation_is_rejected() {
        assert!(matches!(jump_market_rate_series(&spec(), 0.0, 3), Err(EngineError::Truncation { .. })));
    }
}
