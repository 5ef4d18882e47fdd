use rayon::prelude::*;
use stochastic_core::stats::neumaier_sum;
use stochastic_core::{NoiseBundle, PathMatrix, StatePaths};

use crate::error::invalid;
use crate::regression::{PolyRegression, RegressionError};
use crate::{Driver, DriverFlags, EngineError, Result, SolutionSample};

/// Explicit backward scheme
/// `Y_k = Ê[Y_{k+1} | x_k] + g(t_k, Ê[Y_{k+1}|x_k], Z_k)·dt`,
/// `Z_k = Ê[(Y_{k+1} − Ê[Y_{k+1}|x_k])·ΔW_k | x_k] / dt`,
/// with conditional expectations regressed on monomials of the state up to `degree`.
/// `Z` at maturity repeats the last regressed value.
pub fn lsmc_solve(
    driver: &dyn Driver,
    payoff: &[f64],
    state: &StatePaths,
    noise: &NoiseBundle,
    degree: usize,
) -> Result<SolutionSample> {
    let flags = driver.flags();
    if !flags.contains(DriverFlags::LIPSCHITZ) || flags.contains(DriverFlags::JUMP_AWARE) {
        return Err(EngineError::UnsupportedDriver(driver.name().to_string()));
    }
    let grid = state.grid;
    let n = state.n_paths();
    if noise.grid != grid || noise.n_paths != n || payoff.len() != n {
        return Err(invalid("lsmc", "payoff, state and noise must share paths and grid"));
    }
    let steps = grid.n_steps();
    let dt = grid.dt();
    let mut ycols: Vec<Vec<f64>> = vec![Vec::new(); steps + 1];
    let mut zcols: Vec<Vec<f64>> = vec![Vec::new(); steps + 1];
    ycols[steps] = payoff.to_vec();

    for k in (0..steps).rev() {
        let x = state.values.column(k);
        let next = &ycols[k + 1];
        let (ey, ez): (Vec<f64>, Vec<f64>) = match PolyRegression::new(&x, degree) {
            Ok(r) => {
                let cy = r.fit(&x, next);
                let ey: Vec<f64> = x.par_iter().map(|v| r.predict(&cy, *v)).collect();
                let ydw: Vec<f64> = (0..n).map(|i| (next[i] - ey[i]) * noise.dw(i, k, 0)).collect();
                let cz = r.fit(&x, &ydw);
                let ez = x.par_iter().map(|v| r.predict(&cz, *v) / dt).collect();
                (ey, ez)
            }
            Err(RegressionError::Degenerate) => {
                let my = neumaier_sum(next.iter().copied()) / n as f64;
                let ydw = (0..n).map(|i| (next[i] - my) * noise.dw(i, k, 0));
                let mz = neumaier_sum(ydw) / n as f64 / dt;
                (vec![my; n], vec![mz; n])
            }
            Err(RegressionError::RankDeficient) => return Err(EngineError::RankDeficient { degree, index: k }),
        };
        let t = grid.time(k);
        ycols[k] = (0..n)
            .into_par_iter()
            .map(|i| ey[i] + dt * driver.evaluate(t, ey[i], &[ez[i]], 0.0, x[i]))
            .collect();
        zcols[k] = ez;
    }
    zcols[steps] = zcols[steps - 1].clone();

    let gather = |cols: &[Vec<f64>]| {
        PathMatrix::from_rows(n, grid.n_points(), |i, row| {
            for (k, v) in row.iter_mut().enumerate() {
                *v = cols[k][i];
            }
        })
    };
    SolutionSample::new(
        grid,
        gather(&ycols),
        vec![gather(&zcols)],
        None,
        Some(state.values.clone()),
    )
}
