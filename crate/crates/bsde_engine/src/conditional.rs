use stochastic_core::stats::MeanSe;
use stochastic_core::StoppingSample;

use crate::error::invalid;
use crate::expectation::{negative_driver_values, resolve};
use crate::regression::{PolyRegression, RegressionError};
use crate::{At, Driver, Method, RateEstimate, Result, SolutionSample};

#[derive(Debug, Clone)]
pub struct ConditionalRate {
    /// Estimated conditional rate on each path.
    pub per_path: Vec<f64>,
    /// Average of the per-path values with the SE of the unconditional estimator.
    pub aggregate: RateEstimate,
    /// Basis degree actually used; 0 means the constant fallback.
    pub degree_used: usize,
}

/// Regression estimate of `−E[1{τ<T}·g(right limit at τ) | F_σ] / P(τ<T)` on a
/// monomial basis of the σ-time state. Lowers the degree when the basis is
/// rank deficient and falls back to the unconditional rate when the state is
/// constant.
pub fn rate_conditional(
    driver: &dyn Driver,
    sol: &SolutionSample,
    tau: &StoppingSample,
    sigma: At<'_>,
    conditioning_state: &[f64],
    degree: usize,
) -> Result<ConditionalRate> {
    let n = sol.n_paths();
    if conditioning_state.len() != n {
        return Err(invalid("conditioning_state", "one feature per path required"));
    }
    for i in 0..n {
        let s = match sigma {
            At::Time(t) => t,
            At::Index(k) => sol.grid.time(k),
            At::Stopping(s) => s.tau[i],
        };
        if s > tau.tau[i] {
            return Err(invalid("sigma", format!("path {i}: sigma = {s} exceeds tau = {}", tau.tau[i])));
        }
    }
    let pos = resolve(At::Stopping(tau), &sol.grid, n)?;
    let values = negative_driver_values(driver, sol, &pos);
    let p_hat = pos.hit_probability.unwrap_or(1.0);
    let mut y = vec![0.0; n];
    for (&(i, _), v) in pos.pairs.iter().zip(&values) {
        y[i] = v / p_hat;
    }

    let mut degree_used = degree;
    let per_path = loop {
        if degree_used == 0 {
            let m = MeanSe::of(&y).mean;
            break vec![m; n];
        }
        match PolyRegression::new(conditioning_state, degree_used) {
            Ok(r) => {
                let c = r.fit(conditioning_state, &y);
                break conditioning_state.iter().map(|x| r.predict(&c, *x)).collect();
            }
            Err(RegressionError::Degenerate) => degree_used = 0,
            Err(RegressionError::RankDeficient) => degree_used -= 1,
        }
    };
    let unconditional = MeanSe::of(&values);
    Ok(ConditionalRate {
        aggregate: RateEstimate {
            value: MeanSe::of(&per_path).mean,
            std_error: unconditional.se,
            method: Method::DriverExpectation,
            instant: pos.instant,
            epsilons: Vec::new(),
            extrapolation: None,
            n_samples: unconditional.n,
            hit_probability: pos.hit_probability,
        },
        per_path,
        degree_used,
    })
}
