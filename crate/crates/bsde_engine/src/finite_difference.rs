use rayon::prelude::*;
use stochastic_core::stats::MeanSe;
use stochastic_core::{PathMatrix, TimeGrid};

use crate::error::invalid;
use crate::expectation::resolve;
use crate::{At, Extrapolation, Method, RateEstimate, Result};

/// `{8, 4, 2, 1}·dt`.
pub fn default_epsilons(grid: &TimeGrid) -> Vec<f64> {
    [8.0, 4.0, 2.0, 1.0].iter().map(|m| m * grid.dt()).collect()
}

/// Least-squares weights `(intercept, slope)` so that `Σ wⱼ·Dⱼ` is the fitted value at `ε = 0`.
fn fit_weights(eps: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = eps.len() as f64;
    if eps.len() == 1 {
        return (vec![1.0], vec![0.0]);
    }
    let mean = eps.iter().sum::<f64>() / n;
    let sxx: f64 = eps.iter().map(|e| (e - mean).powi(2)).sum();
    let slope: Vec<f64> = eps.iter().map(|e| (e - mean) / sxx).collect();
    let intercept = slope.iter().map(|v| 1.0 / n - mean * v).collect();
    (intercept, slope)
}

/// Difference quotients `[ρ_{τ+ε} − ρ_τ]/ε` on common paths, extrapolated
/// linearly to `ε = 0`. Each ε is rounded to a whole number of grid steps;
/// on a path where `τ + ε` passes `T` that ε is left out of the fit.
pub fn rate_finite_difference(
    risk_paths: &PathMatrix,
    grid: &TimeGrid,
    at: At<'_>,
    epsilons: &[f64],
) -> Result<RateEstimate> {
    if risk_paths.n_points() != grid.n_points() {
        return Err(invalid("risk_paths", "paths do not cover the full grid"));
    }
    let mut steps: Vec<usize> = epsilons
        .iter()
        .filter(|e| **e > 0.0 && **e < grid.horizon())
        .map(|e| (e / grid.dt()).round() as usize)
        .filter(|m| *m >= 1)
        .collect();
    steps.sort_unstable_by(|a, b| b.cmp(a));
    steps.dedup();
    if steps.is_empty() {
        return Err(invalid("epsilons", "every epsilon is below the grid resolution"));
    }
    let eps: Vec<f64> = steps.iter().map(|m| *m as f64 * grid.dt()).collect();
    // Offsets past the horizon are dropped per path; steps are descending, so
    // the usable ones form a suffix and each suffix length has its own fit.
    let fits: Vec<(Vec<f64>, Vec<f64>)> = (0..eps.len()).map(|j| fit_weights(&eps[j..])).collect();
    let (w_int, w_slope) = fits[0].clone();

    let pos = resolve(at, grid, risk_paths.n_paths())?;
    let last = grid.n_steps();
    let quotients: Vec<Vec<Option<f64>>> = pos
        .pairs
        .par_iter()
        .map(|&(i, k)| {
            let base = risk_paths.get(i, k);
            steps
                .iter()
                .zip(&eps)
                .map(|(m, e)| (k + m <= last).then(|| (risk_paths.get(i, k + m) - base) / e))
                .collect()
        })
        .collect();
    let extrapolated: Vec<f64> = quotients
        .iter()
        .map(|d| {
            let first = d.iter().position(|q| q.is_some()).unwrap_or(d.len());
            if first == d.len() {
                return f64::NAN;
            }
            d[first..].iter().zip(&fits[first].0).map(|(q, w)| q.expect("usable suffix") * w).sum()
        })
        .collect();
    let mean_q: Vec<f64> = (0..eps.len())
        .map(|j| MeanSe::of(&quotients.iter().filter_map(|d| d[j]).collect::<Vec<_>>()).mean)
        .collect();
    let m = MeanSe::of(&extrapolated);
    let dot = |w: &[f64]| mean_q.iter().zip(w).map(|(d, w)| d * w).sum::<f64>();
    Ok(RateEstimate {
        value: m.mean,
        std_error: m.se,
        method: Method::FiniteDifference,
        instant: pos.instant,
        extrapolation: Some(Extrapolation {
            intercept: dot(&w_int),
            slope: dot(&w_slope),
            quotients: mean_q,
        }),
        epsilons: eps,
        n_samples: m.n,
        hit_probability: pos.hit_probability,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use stochastic_core::make_time_grid;

    #[test]
    fn exponential_decay_extrapolates_to_derivative() {
        let g = make_time_grid(1.0, 1000).unwrap();
        let p = PathMatrix::from_rows(3, g.n_points(), |_, row| {
            for (k, v) in row.iter_mut().enumerate() {
                *v = (-g.time(k)).exp();
            }
        });
        let r = rate_finite_difference(&p, &g, At::Index(0), &default_epsilons(&g)).unwrap();
        assert!((r.value + 1.0).abs() < 1e-3, "{}", r.value);
        assert!(r.std_error < 1e-12);
        let fit = r.extrapolation.unwrap();
        assert!(fit.slope > 0.0);
        assert!(r.epsilons.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn linear_paths_are_exact() {
        let g = make_time_grid(2.0, 40).unwrap();
        let p = PathMatrix::from_rows(2, g.n_points(), |i, row| {
            for (k, v) in row.iter_mut().enumerate() {
                *v = (i as f64 + 1.0) * 3.0 * g.time(k);
            }
        });
        let r = rate_finite_difference(&p, &g, At::Index(5), &default_epsilons(&g)).unwrap();
        assert!((r.value - 4.5).abs() < 1e-12);
    }

    #[test]
    fn offsets_past_horizon_are_dropped() {
        let g = make_time_grid(1.0, 20).unwrap();
        let p = PathMatrix::from_rows(2, g.n_points(), |_, row| {
            for (k, v) in row.iter_mut().enumerate() {
                *v = 2.0 * g.time(k);
            }
        });
        for k in [13, 17, 19] {
            let r = rate_finite_difference(&p, &g, At::Index(k), &default_epsilons(&g)).unwrap();
            assert!((r.value - 2.0).abs() < 1e-12, "k={k}: {}", r.value);
        }
    }

    #[test]
    fn sub_resolution_epsilons_rejected() {
        let g = make_time_grid(1.0, 10).unwrap();
        let p = PathMatrix::from_vec(1, 11, vec![0.0; 11]);
        assert!(rate_finite_difference(&p, &g, At::Index(0), &[0.01, 0.001]).is_err());
    }
}
