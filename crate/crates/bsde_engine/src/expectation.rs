use rayon::prelude::*;
use stochastic_core::stats::MeanSe;
use stochastic_core::{StoppingSample, TimeGrid};

use crate::error::invalid;
use crate::{At, Driver, DriverFlags, EngineError, Instant, Method, RateEstimate, Result, SolutionSample};

/// Resolved evaluation: `(path, grid index)` pairs in path order.
pub(crate) struct Positions {
    pub pairs: Vec<(usize, usize)>,
    pub instant: Instant,
    pub hit_probability: Option<f64>,
}

pub(crate) fn resolve(at: At<'_>, grid: &TimeGrid, n_paths: usize) -> Result<Positions> {
    let fixed = |k: usize| -> Result<Positions> {
        if k >= grid.n_steps() {
            return Err(invalid("t", "rates are defined strictly before maturity"));
        }
        Ok(Positions {
            pairs: (0..n_paths).map(|i| (i, k)).collect(),
            instant: Instant::Time(grid.time(k)),
            hit_probability: None,
        })
    };
    match at {
        At::Index(k) => fixed(k),
        At::Time(t) => {
            let k = grid
                .index_of(t)
                .ok_or_else(|| invalid("t", format!("{t} is not a grid point")))?;
            fixed(k)
        }
        At::Stopping(s) => resolve_stopping(s, grid, n_paths),
    }
}

fn resolve_stopping(s: &StoppingSample, grid: &TimeGrid, n_paths: usize) -> Result<Positions> {
    if s.n_paths() != n_paths || s.grid != *grid {
        return Err(invalid("stopping", "stopping sample does not match the solution"));
    }
    let pairs: Vec<(usize, usize)> = s.hits().collect();
    if pairs.is_empty() {
        return Err(EngineError::EmptyConditioning);
    }
    Ok(Positions {
        pairs,
        instant: Instant::Stopping,
        hit_probability: Some(s.hit_probability()),
    })
}

/// `−g` on each resolved position. At stopping times jump-aware drivers read
/// `(Z, U)` one grid step after τ; everything else is read at τ.
pub(crate) fn negative_driver_values(driver: &dyn Driver, sol: &SolutionSample, pos: &Positions) -> Vec<f64> {
    let right_limit = pos.instant == Instant::Stopping && driver.flags().contains(DriverFlags::JUMP_AWARE);
    let dim = sol.brownian_dim();
    pos.pairs
        .par_iter()
        .map(|&(i, k)| {
            let kz = if right_limit { k + 1 } else { k };
            let mut z = [0.0; 8];
            for (d, m) in sol.z.iter().enumerate().take(8) {
                z[d] = m.get(i, kz);
            }
            let u = sol.u.as_ref().map_or(0.0, |m| m.get(i, kz));
            let state = sol.state.as_ref().map_or(0.0, |m| m.get(i, k));
            -driver.evaluate(sol.grid.time(k), sol.rho.get(i, k), &z[..dim], u, state)
        })
        .collect()
}

/// Bouncing-drift estimate `−E[g(t, ρ_t, Z_t, U_t)]`, conditional on `τ < T` at stopping times.
pub fn rate_driver_expectation(driver: &dyn Driver, sol: &SolutionSample, at: At<'_>) -> Result<RateEstimate> {
    if sol.brownian_dim() > 8 {
        return Err(invalid("z", "at most 8 Brownian dimensions are supported"));
    }
    let pos = resolve(at, &sol.grid, sol.n_paths())?;
    let values = negative_driver_values(driver, sol, &pos);
    let m = MeanSe::of(&values);
    Ok(RateEstimate {
        value: m.mean,
        std_error: m.se,
        method: Method::DriverExpectation,
        instant: pos.instant,
        epsilons: Vec::new(),
        extrapolation: None,
        n_samples: m.n,
        hit_probability: pos.hit_probability,
    })
}
