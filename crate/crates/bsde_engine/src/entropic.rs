use risk_closed_forms::poisson_weights;
use stochastic_core::stats::{neumaier_sum, MeanSe};

use crate::error::invalid;
use crate::{Driver, EngineError, EntropicJumpDriver, Instant, Method, RateEstimate, Result};

/// `−(γ/2)·E[Z_t²]` from sampled exposures.
pub fn entropic_rate_brownian(gamma: f64, z_samples: &[f64], instant: Instant) -> Result<RateEstimate> {
    if !(gamma > 0.0) {
        return Err(invalid("gamma", "must be > 0"));
    }
    let v: Vec<f64> = z_samples.iter().map(|z| -0.5 * gamma * z * z).collect();
    let m = MeanSe::of(&v);
    Ok(RateEstimate {
        value: m.mean,
        std_error: m.se,
        method: Method::DriverExpectation,
        instant,
        epsilons: Vec::new(),
        extrapolation: None,
        n_samples: m.n,
        hit_probability: None,
    })
}

fn truncation(mean: f64) -> usize {
    (mean + 12.0 * mean.sqrt() + 30.0).ceil() as usize
}

fn check_tail(weights: &[f64]) -> Result<()> {
    let tail = (1.0 - neumaier_sum(weights.iter().copied())).max(0.0);
    if tail > 1e-10 {
        return Err(EngineError::Truncation { tail });
    }
    Ok(())
}

/// Entropic risk of a bounded claim `f(N_T)` on a Poisson filtration.
pub struct EntropicJumpModel<'a> {
    pub gamma: f64,
    pub jump_rate: f64,
    pub horizon: f64,
    payoff: &'a dyn Fn(u64) -> f64,
    shift: f64,
}

impl<'a> EntropicJumpModel<'a> {
    pub fn new(gamma: f64, jump_rate: f64, horizon: f64, payoff: &'a dyn Fn(u64) -> f64) -> Result<Self> {
        if !(gamma > 0.0) || !(jump_rate >= 0.0) || !(horizon > 0.0) {
            return Err(invalid("entropic_jump", "need gamma > 0, jump_rate >= 0, horizon > 0"));
        }
        let reach = 2 * truncation(jump_rate * horizon) + 2;
        let shift = (0..reach as u64).map(|n| gamma * payoff(n)).fold(f64::NEG_INFINITY, f64::max);
        Ok(EntropicJumpModel { gamma, jump_rate, horizon, payoff, shift })
    }

    /// `M(t, n)·e^{−shift}` where `M(t, n) = E[e^{γX} | N_t = n]`.
    fn scaled_m(&self, t: f64, n: u64, w: &[f64]) -> f64 {
        let _ = t;
        neumaier_sum(
            w.iter()
                .enumerate()
                .map(|(j, p)| p * (self.gamma * (self.payoff)(n + j as u64) - self.shift).exp()),
        )
    }

    fn increment_weights(&self, t: f64) -> Result<Vec<f64>> {
        let m = self.jump_rate * (self.horizon - t);
        let w = poisson_weights(m, truncation(m));
        check_tail(&w)?;
        Ok(w)
    }

    /// `e^γ_t` on the event `N_t = n`.
    pub fn value(&self, t: f64, n: u64) -> Result<f64> {
        let w = self.increment_weights(t)?;
        Ok((self.scaled_m(t, n, &w).ln() + self.shift) / self.gamma)
    }

    /// Jump component `U_t = e^γ(t, n+1) − e^γ(t, n)`.
    pub fn jump_u(&self, t: f64, n: u64) -> Result<f64> {
        let w = self.increment_weights(t)?;
        Ok((self.scaled_m(t, n + 1, &w).ln() - self.scaled_m(t, n, &w).ln()) / self.gamma)
    }
}

#[derive(Debug, Clone)]
pub struct EntropicJumpRates {
    /// From `(1/γ)·E[∫(ln(1 + K/M) − K/M) dν]`.
    pub representation_1: RateEstimate,
    /// From `−E[g(U)]` with the entropic jump driver.
    pub representation_2: RateEstimate,
}

/// Both rate representations at deterministic `t`, by Poisson transition sums.
pub fn entropic_rate_jump(
    gamma: f64,
    jump_rate: f64,
    payoff: &dyn Fn(u64) -> f64,
    horizon: f64,
    t: f64,
) -> Result<EntropicJumpRates> {
    if !(0.0..horizon).contains(&t) {
        return Err(invalid("t", "must lie in [0, T)"));
    }
    let model = EntropicJumpModel::new(gamma, jump_rate, horizon, payoff)?;
    let w_inc = model.increment_weights(t)?;
    let m_t = jump_rate * t;
    let w_now = poisson_weights(m_t, truncation(m_t));
    check_tail(&w_now)?;

    let reach = w_now.len() + w_inc.len() + 1;
    let (lo, hi) = (0..reach as u64)
        .map(|n| gamma * payoff(n) - model.shift)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    let floor = -1.0 + (lo - hi).exp();

    let scaled: Vec<f64> = (0..=w_now.len() as u64).map(|n| model.scaled_m(t, n, &w_inc)).collect();
    let driver = EntropicJumpDriver { gamma, intensity: jump_rate };
    let mut rep1 = Vec::with_capacity(w_now.len());
    let mut rep2 = Vec::with_capacity(w_now.len());
    for (n, p) in w_now.iter().enumerate() {
        let ratio = scaled[n + 1] / scaled[n] - 1.0;
        if ratio < floor - 1e-12 {
            return Err(EngineError::Invariant(format!(
                "K/M = {ratio} below the lower bound {floor} at n = {n}"
            )));
        }
        rep1.push(p * jump_rate / gamma * (ratio.ln_1p() - ratio));
        let u = (scaled[n + 1].ln() - scaled[n].ln()) / gamma;
        rep2.push(-p * driver.evaluate(t, 0.0, &[0.0], u, 0.0));
    }
    let estimate = |v: Vec<f64>, method| RateEstimate {
        value: neumaier_sum(v),
        ..RateEstimate::closed_form(0.0, Instant::Time(t))
    }
    .with_method(method);
    Ok(EntropicJumpRates {
        representation_1: estimate(rep1, Method::ClosedForm),
        representation_2: estimate(rep2, Method::DriverExpectation),
    })
}

impl RateEstimate {
    fn with_method(mut self, method: Method) -> RateEstimate {
        self.method = method;
        self
    }
}
