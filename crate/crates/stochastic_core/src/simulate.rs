use crate::error::require;
use crate::{CoreError, ModelTag, NoiseBundle, PathMatrix, Result, StatePaths, TimeGrid};

fn check_grid(grid: &TimeGrid, noise: &NoiseBundle) -> Result<()> {
    if noise.grid != *grid {
        return Err(CoreError::GridMismatch {
            expected: grid.n_steps(),
            found: noise.grid.n_steps(),
        });
    }
    Ok(())
}

/// Exact log-Euler geometric Brownian motion, drift `+mu`.
pub fn simulate_gbm(grid: TimeGrid, s0: f64, mu: f64, sigma: f64, noise: &NoiseBundle) -> Result<StatePaths> {
    exp_paths(grid, s0, mu, sigma, None, noise, ModelTag::Gbm)
}

/// GBM with multiplicative jumps: each Poisson event scales the price by `1 + gamma`.
pub fn simulate_jump_gbm(
    grid: TimeGrid,
    s0: f64,
    mu: f64,
    sigma: f64,
    gamma: f64,
    noise: &NoiseBundle,
) -> Result<StatePaths> {
    require(gamma > -1.0, "gamma", gamma, "jump multiplier must exceed -1")?;
    exp_paths(grid, s0, mu, sigma, Some(gamma), noise, ModelTag::JumpGbm)
}

fn exp_paths(
    grid: TimeGrid,
    s0: f64,
    mu: f64,
    sigma: f64,
    gamma: Option<f64>,
    noise: &NoiseBundle,
    model: ModelTag,
) -> Result<StatePaths> {
    require(s0.is_finite() && s0 > 0.0, "s0", s0, "must be > 0")?;
    require(sigma.is_finite() && sigma >= 0.0, "sigma", sigma, "must be >= 0")?;
    require(mu.is_finite(), "mu", mu, "must be finite")?;
    check_grid(&grid, noise)?;
    let drift = (mu - 0.5 * sigma * sigma) * grid.dt();
    let values = PathMatrix::from_rows(noise.n_paths, grid.n_points(), |i, row| {
        let mut s = s0;
        row[0] = s;
        for k in 0..grid.n_steps() {
            s *= (drift + sigma * noise.dw(i, k, 0)).exp();
            if let Some(g) = gamma {
                s *= (1.0 + g).powi(noise.count(i, k) as i32);
            }
            row[k + 1] = s;
        }
    });
    Ok(StatePaths { model, grid, values })
}

/// Vasicek short rate with the exact Gaussian one-step transition.
pub fn simulate_vasicek(
    grid: TimeGrid,
    r0: f64,
    a: f64,
    b: f64,
    sigma: f64,
    noise: &NoiseBundle,
) -> Result<StatePaths> {
    require(a.is_finite() && a > 0.0, "a", a, "mean-reversion speed must be > 0")?;
    require(sigma.is_finite() && sigma >= 0.0, "sigma", sigma, "must be >= 0")?;
    check_grid(&grid, noise)?;
    let dt = grid.dt();
    let decay = (-a * dt).exp();
    let sd = sigma * ((1.0 - (-2.0 * a * dt).exp()) / (2.0 * a)).sqrt();
    let scale = sd / dt.sqrt();
    let values = PathMatrix::from_rows(noise.n_paths, grid.n_points(), |i, row| {
        let mut r = r0;
        row[0] = r;
        for k in 0..grid.n_steps() {
            r = r * decay + b * (1.0 - decay) + scale * noise.dw(i, k, 0);
            row[k + 1] = r;
        }
    });
    Ok(StatePaths { model: ModelTag::Vasicek, grid, values })
}

/// `X_t = x0 + mu·t + sigma·W_t` with constant coefficients.
pub fn simulate_arithmetic(grid: TimeGrid, x0: f64, mu: f64, sigma: f64, noise: &NoiseBundle) -> Result<StatePaths> {
    check_grid(&grid, noise)?;
    let dt = grid.dt();
    let values = PathMatrix::from_rows(noise.n_paths, grid.n_points(), |i, row| {
        let mut x = x0;
        row[0] = x;
        for k in 0..grid.n_steps() {
            x += mu * dt + sigma * noise.dw(i, k, 0);
            row[k + 1] = x;
        }
    });
    Ok(StatePaths { model: ModelTag::BrownianArith, grid, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::{variance_with_se, MeanSe};
    use crate::{make_time_grid, sample_noise};

    fn noise(n: usize, steps: usize, rate: f64, seed: u64) -> NoiseBundle {
        sample_noise(make_time_grid(1.0, steps).unwrap(), n, 1, rate, seed).unwrap()
    }

    #[test]
    fn zero_vol_gbm_is_deterministic() {
        let nz = noise(10, 8, 0.0, 1);
        let p = simulate_gbm(nz.grid, 100.0, 0.05, 0.0, &nz).unwrap();
        for i in 0..10 {
            for k in 0..=8 {
                let t = nz.grid.time(k);
                assert!((p.values.get(i, k) - 100.0 * (0.05 * t).exp()).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn gbm_terminal_mean() {
        let nz = noise(100_000, 50, 0.0, 2);
        let p = simulate_gbm(nz.grid, 1000.0, 0.10, 0.10, &nz).unwrap();
        let m = MeanSe::of(&p.terminal());
        assert!((m.mean - 1000.0 * 0.1f64.exp()).abs() < 4.0 * m.se);
        let p = simulate_gbm(nz.grid, 1000.0, 0.0, 0.2, &nz).unwrap();
        let m = MeanSe::of(&p.terminal());
        assert!((m.mean - 1000.0).abs() < 4.0 * m.se);
    }

    #[test]
    fn gbm_rejects_bad_s0() {
        let nz = noise(2, 2, 0.0, 1);
        assert!(simulate_gbm(nz.grid, 0.0, 0.1, 0.1, &nz).is_err());
    }

    #[test]
    fn vasicek_fixed_point() {
        let nz = noise(5, 10, 0.0, 3);
        let p = simulate_vasicek(nz.grid, 0.03, 0.7, 0.03, 0.0, &nz).unwrap();
        assert!(p.values.as_slice().iter().all(|r| (r - 0.03).abs() < 1e-15));
    }

    #[test]
    fn vasicek_terminal_moments() {
        let nz = noise(100_000, 252, 0.0, 4);
        let (a, sigma) = (1.0, 0.01);
        let p = simulate_vasicek(nz.grid, 0.02, a, 0.02, sigma, &nz).unwrap();
        let rt = p.terminal();
        let m = MeanSe::of(&rt);
        assert!((m.mean - 0.02).abs() < 4.0 * m.se);
        let (var, se) = variance_with_se(&rt);
        let target = sigma * sigma * (1.0 - (-2.0 * a as f64).exp()) / (2.0 * a);
        assert!((var - target).abs() < 4.0 * se, "{var} vs {target}");
    }

    #[test]
    fn vasicek_rejects_nonpositive_speed() {
        let nz = noise(2, 2, 0.0, 1);
        assert!(simulate_vasicek(nz.grid, 0.02, 0.0, 0.02, 0.01, &nz).is_err());
    }

    #[test]
    fn jump_gbm_reductions() {
        let nz = noise(200, 20, 3.0, 5);
        let plain = simulate_gbm(nz.grid, 10.0, 0.1, 0.2, &nz).unwrap();
        let nojump = simulate_jump_gbm(nz.grid, 10.0, 0.1, 0.2, 0.0, &nz).unwrap();
        assert_eq!(plain.values, nojump.values);

        let quiet = noise(200, 20, 0.0, 5);
        let plain = simulate_gbm(quiet.grid, 10.0, 0.1, 0.2, &quiet).unwrap();
        let jumps = simulate_jump_gbm(quiet.grid, 10.0, 0.1, 0.2, 0.5, &quiet).unwrap();
        assert_eq!(plain.values, jumps.values);
    }

    #[test]
    fn jump_gbm_compensated_mean() {
        // E[(1+γ)^{N_T}] = e^{λTγ}, so mu = -λγ keeps E[S_T] = s0.
        let (lambda, gamma) = (2.0, 0.1);
        let nz = noise(100_000, 20, lambda, 6);
        let p = simulate_jump_gbm(nz.grid, 100.0, -lambda * gamma, 0.2, gamma, &nz).unwrap();
        let m = MeanSe::of(&p.terminal());
        assert!((m.mean - 100.0).abs() < 4.0 * m.se, "{} ± {}", m.mean, m.se);
        assert!(p.values.as_slice().iter().all(|s| *s > 0.0));
    }

    #[test]
    fn jump_gbm_rejects_gamma() {
        let nz = noise(2, 2, 1.0, 1);
        assert!(simulate_jump_gbm(nz.grid, 1.0, 0.0, 0.1, -1.0, &nz).is_err());
    }

    #[test]
    fn arithmetic_matches_brownian_sum() {
        let nz = noise(3, 4, 0.0, 8);
        let p = simulate_arithmetic(nz.grid, 1.0, 0.5, 2.0, &nz).unwrap();
        let w: f64 = nz.path_dw(1, 0).sum();
        assert!((p.values.get(1, 4) - (1.0 + 0.5 + 2.0 * w)).abs() < 1e-12);
    }
}
