use bsde_engine::{
    lsmc_solve, rate_conditional, rate_driver_expectation, At, BondDriver, EngineError, LinearMarketDriver, RateSource,
    SolutionSample, ZeroDriver,
};
use risk_closed_forms::{bs_put_price, bs_put_z, BsPutSpec};
use stochastic_core::stats::MeanSe;
use stochastic_core::{first_hitting, make_time_grid, sample_noise, simulate_gbm, Direction, PathMatrix};

fn put_spec() -> BsPutSpec {
    BsPutSpec { s0: 1000.0, strike: 1000.0, mu: 0.1, sigma: 0.1, horizon: 1.0 }
}

#[test]
fn zero_driver_recovers_mean_payoff() {
    let grid = make_time_grid(1.0, 20).unwrap();
    let noise = sample_noise(grid, 20_000, 1, 0.0, 5).unwrap();
    let s = simulate_gbm(grid, 100.0, 0.05, 0.2, &noise).unwrap();
    let payoff = s.terminal();
    let sol = lsmc_solve(&ZeroDriver, &payoff, &s, &noise, 3).unwrap();
    let m = MeanSe::of(&payoff);
    assert!((sol.rho.get(0, 0) - m.mean).abs() <= 4.0 * m.se, "{} vs {} ± {}", sol.rho.get(0, 0), m.mean, m.se);
}

#[test]
fn linear_driver_put_matches_black_scholes() {
    let spec = put_spec();
    let grid = make_time_grid(1.0, 50).unwrap();
    let noise = sample_noise(grid, 100_000, 1, 0.0, 42).unwrap();
    let s = simulate_gbm(grid, spec.s0, spec.mu, spec.sigma, &noise).unwrap();
    let payoff: Vec<f64> = s.terminal().iter().map(|x| (spec.strike - x).max(0.0)).collect();
    let sol = lsmc_solve(&LinearMarketDriver::new(spec.mu, spec.sigma), &payoff, &s, &noise, 4).unwrap();
    let exact = bs_put_price(&spec, 0.0, spec.s0).unwrap();
    let y0 = sol.rho.get(0, 0);
    assert!(((y0 - exact) / exact).abs() < 0.01, "{y0} vs {exact}");
    let z_mid = MeanSe::of(&sol.z[0].column(25));
    let z_ref = MeanSe::of(&s.values.column(25).iter().map(|x| bs_put_z(&spec, 0.5, *x)).collect::<Vec<_>>());
    assert!(((z_mid.mean - z_ref.mean) / z_ref.mean).abs() < 0.05, "{} vs {}", z_mid.mean, z_ref.mean);
}

#[test]
fn constant_rate_bond_driver_discounts() {
    let grid = make_time_grid(1.0, 20).unwrap();
    let noise = sample_noise(grid, 20_000, 1, 0.0, 9).unwrap();
    let s = simulate_gbm(grid, 100.0, 0.05, 0.2, &noise).unwrap();
    let payoff = s.terminal();
    let r = 0.03;
    let sol = lsmc_solve(&BondDriver { rate: RateSource::Constant(r) }, &payoff, &s, &noise, 3).unwrap();
    let m = MeanSe::of(&payoff);
    // The explicit Euler scheme discounts by (1 − r·dt)^N.
    let disc = (1.0 - r * grid.dt()).powi(grid.n_steps() as i32);
    assert!((disc - (-r as f64).exp()).abs() < 1e-3);
    let target = (-r as f64).exp() * m.mean;
    assert!((sol.rho.get(0, 0) - target).abs() <= 4.0 * m.se + 1e-3 * target);
}

#[test]
fn quadratic_drivers_are_rejected() {
    let grid = make_time_grid(1.0, 4).unwrap();
    let noise = sample_noise(grid, 10, 1, 0.0, 1).unwrap();
    let s = simulate_gbm(grid, 1.0, 0.0, 0.2, &noise).unwrap();
    let d = bsde_engine::EntropicBrownianDriver { gamma: 1.0 };
    assert!(matches!(lsmc_solve(&d, &s.terminal(), &s, &noise, 2), Err(EngineError::UnsupportedDriver(_))));
}

/// Closed-form put risk process with its exposure on a simulated ensemble.
fn put_solution(n_paths: usize, seed: u64) -> (SolutionSample, PathMatrix) {
    let spec = put_spec();
    let grid = make_time_grid(1.0, 252).unwrap();
    let noise = sample_noise(grid, n_paths, 1, 0.0, seed).unwrap();
    let s = simulate_gbm(grid, spec.s0, spec.mu, spec.sigma, &noise).unwrap();
    let rho = s.values.map(|k, v| bs_put_price(&spec, grid.time(k), v).unwrap());
    let z = s.values.map(|k, v| bs_put_z(&spec, grid.time(k), v));
    (SolutionSample::new(grid, rho.clone(), vec![z], None, Some(s.values.clone())).unwrap(), rho)
}

#[test]
fn conditional_rate_averages_to_unconditional() {
    let spec = put_spec();
    let (sol, rho) = put_solution(20_000, 3);
    let tau = first_hitting(&rho, sol.grid, 60.0, Direction::Below).unwrap();
    let driver = LinearMarketDriver::new(spec.mu, spec.sigma);
    let uncond = rate_driver_expectation(&driver, &sol, At::Stopping(&tau)).unwrap();

    let state_at_tau: Vec<f64> = (0..sol.n_paths())
        .map(|i| sol.state.as_ref().unwrap().get(i, tau.hit_index[i].unwrap_or(sol.grid.n_steps())))
        .collect();
    let same = rate_conditional(&driver, &sol, &tau, At::Stopping(&tau), &state_at_tau, 3).unwrap();
    assert!(same.aggregate.within(uncond.value, 4.0), "{} vs {}", same.aggregate.value, uncond.value);

    let trivial = rate_conditional(&driver, &sol, &tau, At::Time(0.0), &vec![1.0; sol.n_paths()], 3).unwrap();
    assert_eq!(trivial.degree_used, 0);
    assert!(trivial.per_path.iter().all(|v| (v - uncond.value).abs() < 1e-9 * uncond.value.abs()));

    let zero = rate_conditional(&ZeroDriver, &sol, &tau, At::Time(0.0), &state_at_tau, 2).unwrap();
    assert!(zero.per_path.iter().all(|v| *v == 0.0));
}
