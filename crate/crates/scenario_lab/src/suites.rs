use bsde_engine::{
    ambiguous_rate_value_and_rate, default_epsilons, entropic_rate_brownian, jump_market_rate, lsmc_solve,
    rate_driver_expectation, rate_finite_difference, At, BondDriver, Driver, EntropicBrownianDriver, Instant,
    LinearMarketDriver, LinearYDriver, PositivePartDriver, RateEstimate, RateSource, SolutionSample, ZeroDriver,
};
use resilience_toolkit::{
    acceptance_family_properties, adjusted_risk_expansion_check, adjusted_risk_paths, expansion_check_exact,
    is_acceptable, min_acceptance_level, neutral_solution, resilience_neutral_driver, AcceptanceLevel,
    AcceptanceQuery, RateCurve, Rescale,
};
use risk_closed_forms::{bs_put_price, var_rate, DeterministicFn, GaussianClaimSpec, VasicekBondSpec};
use stochastic_core::{first_hitting, make_time_grid, sample_noise, simulate_gbm, Direction, PathMatrix};

use crate::config::{Fig1Params, Fig2Params, ScenarioParams};
use crate::report::{num, Check};
use crate::scenarios::{appd, ex54, ex55, fig1, fig2};
use crate::{run_scenario, Result, ScenarioConfig, ScenarioId, BASE_SE_BAND};

/// Named list of checks from one suite.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    fn new(name: &str) -> SuiteReport {
        SuiteReport { name: name.to_string(), checks: Vec::new() }
    }

    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check::new(name, passed, detail));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    /// Fixed-width pass/fail table.
    pub fn table(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let mut out = format!("== {} ==\n", self.name);
        for c in &self.checks {
            let flag = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{flag}  {:width$}  {}\n", c.name, c.detail));
        }
        out
    }
}

fn fig1_defaults() -> Fig1Params {
    match ScenarioConfig::defaults(ScenarioId::Fig1Put).params {
        ScenarioParams::Fig1Put(p) => p,
        _ => unreachable!("fig1 defaults carry fig1 parameters"),
    }
}

fn fig2_defaults() -> Fig2Params {
    match ScenarioConfig::defaults(ScenarioId::Fig2Vasicek).params {
        ScenarioParams::Fig2Vasicek(p) => p,
        _ => unreachable!("fig2 defaults carry fig2 parameters"),
    }
}

fn sized(id: ScenarioId, n_paths: usize, n_steps: usize, seed: u64) -> ScenarioConfig {
    ScenarioConfig { n_paths, n_steps, seed, ..ScenarioConfig::defaults(id) }
}

fn driver_rates(driver: &dyn Driver, sol: &SolutionSample) -> Result<Vec<RateEstimate>> {
    (0..sol.grid.n_steps()).map(|k| Ok(rate_driver_expectation(driver, sol, At::Index(k))?)).collect()
}

/// Solution of `g = κ·y` (or `y⁺` for nonnegative claims, with `κ = 1`) for `X = a·S_T + b·S_T²`
/// on a driftless GBM: `ρ_t = e^{κ(T−t)}·(a·S_t + b·S_t²·e^{σ²(T−t)})`.
fn discounted_claim(s: &PathMatrix, times: &[f64], horizon: f64, kappa: f64, sigma: f64, a: f64, b: f64) -> (PathMatrix, PathMatrix) {
    let rho = s.map(|k, x| {
        let tau = horizon - times[k];
        (kappa * tau).exp() * (a * x + b * x * x * (sigma * sigma * tau).exp())
    });
    let z = s.map(|k, x| {
        let tau = horizon - times[k];
        (kappa * tau).exp() * sigma * (a * x + 2.0 * b * x * x * (sigma * sigma * tau).exp())
    });
    (rho, z)
}

/// Cash-insensitivity, positive homogeneity, time consistency, comparison,
/// concavity, L² stability, acceptance-set round trips, martingale neutrality
/// and the supermartingale sign, each under common random numbers.
pub fn property_suite(n_paths: usize, seed: u64, tolerance_scale: f64) -> Result<SuiteReport> {
    let k = BASE_SE_BAND * tolerance_scale;
    let mut out = SuiteReport::new("properties");
    let p = fig1_defaults();
    let cfg = sized(ScenarioId::Fig1Put, n_paths, 50, seed);
    let sol = fig1::put_solution(&cfg, &p)?;
    let grid = sol.grid;
    let steps = grid.n_steps();
    let linear = LinearMarketDriver::new(p.mu, p.sigma);
    let base = driver_rates(&linear, &sol)?;

    let h = 123.5;
    let mut exact = true;
    for d in [&linear as &dyn Driver, &EntropicBrownianDriver { gamma: 0.01 }] {
        let a = driver_rates(d, &sol)?;
        let b = driver_rates(d, &sol.shifted(h))?;
        exact &= a.iter().zip(&b).all(|(x, y)| x.value == y.value && x.std_error == y.std_error);
    }
    out.push("cash_insensitivity", exact, format!("linear and entropic drivers, shift {h}, {steps} grid points, bitwise equal"));

    let mut worst: f64 = 0.0;
    for alpha in [0.0, 0.5, 2.0] {
        let scaled = driver_rates(&linear, &sol.scaled(alpha))?;
        for (s, r) in scaled.iter().zip(&base) {
            worst = worst.max((s.value - alpha * r.value).abs() / (1.0 + r.value.abs()));
        }
    }
    out.push("positive_homogeneity", worst <= 1e-12, format!("alpha in {{0, 0.5, 2}}, largest relative deviation {}", num(worst)));

    let s_idx = steps / 2;
    let cut = sol.truncated(s_idx)?;
    let eps = default_epsilons(&grid);
    let longest = (eps[0] / grid.dt()).round() as usize;
    let mut same = true;
    for kk in 0..s_idx {
        same &= rate_driver_expectation(&linear, &cut, At::Index(kk))?.value == base[kk].value;
        if kk + longest <= s_idx {
            let a = rate_finite_difference(&cut.rho, &cut.grid, At::Index(kk), &eps)?;
            let b = rate_finite_difference(&sol.rho, &grid, At::Index(kk), &eps)?;
            same &= a.value == b.value;
        }
    }
    out.push(
        "time_consistency",
        same,
        format!("claim replaced by its risk at t = {}; rates before it unchanged bitwise", num(grid.time(s_idx))),
    );

    let (sigma, kappa) = (0.2, 0.5);
    let noise = sample_noise(grid, n_paths, 1, 0.0, seed)?;
    let s = simulate_gbm(grid, 1.0, 0.0, sigma, &noise)?.values;
    let times = grid.times();
    let horizon = grid.horizon();
    let (r1, z1) = discounted_claim(&s, &times, horizon, kappa, sigma, 1.0, 0.0);
    let r2 = r1.map(|kk, v| v - 0.5 * (kappa * (horizon - times[kk])).exp());
    let hi = SolutionSample::new(grid, r1, vec![z1.clone()], None, None)?;
    let lo = SolutionSample::new(grid, r2, vec![z1], None, None)?;
    let g = LinearYDriver { kappa };
    let (rh, rl) = (driver_rates(&g, &hi)?, driver_rates(&g, &lo)?);
    let mut ordered = true;
    let mut near_closed = true;
    for kk in 0..steps {
        let tau = horizon - times[kk];
        let (c_hi, c_lo) = (-kappa * (kappa * tau).exp(), -kappa * (kappa * tau).exp() * 0.5);
        ordered &= c_hi <= c_lo && rh[kk].value <= rl[kk].value;
        near_closed &= rh[kk].within(c_hi, k) && rl[kk].within(c_lo, k);
    }
    out.push("comparison_ordering", ordered, format!("g = {kappa}·y, X1 = S_T >= X2 = S_T − 0.5: closed form and MC ordered at every grid t"));
    out.push("comparison_closed_form", near_closed, format!("MC within {k} SE of −κe^{{κ(T−t)}}E[X] at every grid t"));

    let (ra, za) = discounted_claim(&s, &times, horizon, 1.0, sigma, 1.0, 0.0);
    let (rb, zb) = discounted_claim(&s, &times, horizon, 1.0, sigma, 0.0, 1.0);
    let xa = SolutionSample::new(grid, ra.clone(), vec![za.clone()], None, None)?;
    let xb = SolutionSample::new(grid, rb.clone(), vec![zb.clone()], None, None)?;
    let (rate_a, rate_b) = (driver_rates(&PositivePartDriver, &xa)?, driver_rates(&PositivePartDriver, &xb)?);
    let mut concave = true;
    for lambda in [0.25, 0.5, 0.75] {
        let mix_r = PathMatrix::from_rows(n_paths, grid.n_points(), |i, row| {
            for (kk, v) in row.iter_mut().enumerate() {
                *v = lambda * ra.get(i, kk) + (1.0 - lambda) * rb.get(i, kk);
            }
        });
        let mix_z = PathMatrix::from_rows(n_paths, grid.n_points(), |i, row| {
            for (kk, v) in row.iter_mut().enumerate() {
                *v = lambda * za.get(i, kk) + (1.0 - lambda) * zb.get(i, kk);
            }
        });
        let mix = driver_rates(&PositivePartDriver, &SolutionSample::new(grid, mix_r, vec![mix_z], None, None)?)?;
        for kk in 0..steps {
            let lhs = lambda * rate_a[kk].value + (1.0 - lambda) * rate_b[kk].value;
            let se = (rate_a[kk].std_error.powi(2) + rate_b[kk].std_error.powi(2) + mix[kk].std_error.powi(2)).sqrt();
            concave &= lhs <= mix[kk].value + k * se;
        }
    }
    out.push("concavity", concave, format!("g = y⁺, X1 = S_T, X2 = S_T², lambda in {{0.25, 0.5, 0.75}}, slack {k} combined SE"));

    let mut dist = Vec::new();
    for n in 1..=4 {
        let d = 0.5f64.powi(n);
        let gn = LinearMarketDriver::new(p.mu * (1.0 + d), p.sigma);
        let rn = driver_rates(&gn, &sol.scaled(1.0 + d))?;
        let l2 = (rn.iter().zip(&base).map(|(a, b)| (a.value - b.value).powi(2)).sum::<f64>() / steps as f64).sqrt();
        dist.push(l2);
    }
    let monotone = dist.windows(2).all(|w| w[1] < w[0]) && dist[3] > 0.0;
    out.push(
        "l2_stability",
        monotone,
        format!("grid-L² distances {}", dist.iter().map(|v| num(*v)).collect::<Vec<_>>().join(" > ")),
    );

    let mut round_trip = true;
    for kk in [0, steps / 4, steps / 2, steps - 1] {
        round_trip &= acceptance_family_properties(&linear, &sol, At::Index(kk), 10.0, 2.0, 1.0)?.passes();
        let r = &base[kk];
        for a in [r.value - 1.0, r.value, r.value + 1.0] {
            let q = AcceptanceQuery { level: AcceptanceLevel::Finite(a), instant: r.instant };
            round_trip &= is_acceptable(r, &q)?.accepted == (min_acceptance_level(r) <= a);
        }
    }
    out.push("acceptance_round_trips", round_trip, "membership equals min-level comparison; shift and scale families consistent");

    let m = ex55::martingale_solution(&sized(ScenarioId::Ex55Martingale, n_paths, 50, seed), &ex55_defaults())?;
    let mut neutral = true;
    for kk in [0, steps / 4, steps / 2, 3 * steps / 4] {
        let f = rate_finite_difference(&m.rho, &m.grid, At::Index(kk), &default_epsilons(&m.grid))?;
        neutral &= f.within(0.0, k) && rate_driver_expectation(&ZeroDriver, &m, At::Index(kk))?.value == 0.0;
    }
    let tau = first_hitting(&m.rho, m.grid, 1.0, Direction::Above)?;
    let f = rate_finite_difference(&m.rho, &m.grid, At::Stopping(&tau), &default_epsilons(&m.grid))?;
    neutral &= f.within(0.0, k);
    out.push("martingale_neutrality", neutral, format!("zero driver: finite difference within {k} SE of 0 at fixed and hitting times"));

    let supermartingale = base.iter().all(|r| r.value <= k * r.std_error);
    out.push("supermartingale_sign", supermartingale, "put price under positive drift: rate <= 0 within SE at every grid t");
    Ok(out)
}

fn ex55_defaults() -> crate::config::MartingaleParams {
    match ScenarioConfig::defaults(ScenarioId::Ex55Martingale).params {
        ScenarioParams::Ex55Martingale(p) => p,
        _ => unreachable!("ex55 defaults carry martingale parameters"),
    }
}

/// Closed-form and Monte Carlo pins with exactly known rates.
pub fn analytic_pins(n_paths: usize, seed: u64, tolerance_scale: f64) -> Result<SuiteReport> {
    let k = BASE_SE_BAND * tolerance_scale;
    let mut out = SuiteReport::new("analytic_pins");

    let spec = GaussianClaimSpec::constant(0.0, 0.0, 1.0, 1.0);
    let zero = [0.0, 0.3, 0.9].iter().map(|t| var_rate(&spec, *t, 0.5)).collect::<std::result::Result<Vec<_>, _>>()?;
    out.push("var_rate_median_zero", zero.iter().all(|v| *v == 0.0), format!("rates {:?}", zero));

    let grid = make_time_grid(1.0, 50)?;
    let noise = sample_noise(grid, n_paths, 1, 0.0, seed)?;
    let w = stochastic_core::simulate_arithmetic(grid, 0.0, 0.0, 1.0, &noise)?.values;
    let quarter = grid.nearest_index(0.25);
    for (c, gamma) in [(1.0, 0.5), (1.0, 1.0), (1.0, 2.0), (0.5, 1.0)] {
        let exact = -0.5 * gamma * c * c;
        let quad = ex54::quadrature_rate(c, gamma, 1.0, &[0.1, 0.3, 0.5])?;
        out.push(
            format!("entropic_closed_form c={c} gamma={gamma}"),
            (quad - exact).abs() <= 1e-10,
            format!("quadrature slope {} vs {}", num(quad), num(exact)),
        );
        let sol = ex54::linear_claim_solution(&w, grid, c, gamma)?;
        let d = rate_driver_expectation(&EntropicBrownianDriver { gamma }, &sol, At::Index(quarter))?;
        let e = entropic_rate_brownian(gamma, &sol.z[0].column(quarter), Instant::Time(grid.time(quarter)))?;
        let f = rate_finite_difference(&sol.rho, &grid, At::Index(quarter), &default_epsilons(&grid))?;
        out.push(
            format!("entropic_mc c={c} gamma={gamma}"),
            d.within(exact, k) && e.within(exact, k) && f.within(exact, k),
            format!("driver {}, z-sample {}, finite difference {} ± {}", num(d.value), num(e.value), num(f.value), num(f.std_error)),
        );
    }

    let m = ex55::martingale_solution(&sized(ScenarioId::Ex55Martingale, n_paths, 50, seed), &ex55_defaults())?;
    let d = rate_driver_expectation(&ZeroDriver, &m, At::Index(quarter))?;
    let f = rate_finite_difference(&m.rho, &m.grid, At::Index(quarter), &default_epsilons(&m.grid))?;
    out.push(
        "zero_driver_rate",
        d.value == 0.0 && d.std_error == 0.0 && f.within(0.0, k),
        format!("driver {}, finite difference {} ± {}", num(d.value), num(f.value), num(f.std_error)),
    );

    let p = fig2_defaults();
    let v = fig2::spec(&p);
    let target = v.mean(v.horizon);
    let errs: Vec<f64> = (2..=5).map(|j| (v.rate(v.horizon - 10f64.powi(-j)) - target).abs()).collect();
    let ratios: Vec<f64> = (2..=5)
        .map(|j| {
            let h = 10f64.powi(-j);
            (v.rate(v.horizon - h) - target).abs() / (v.rate(v.horizon - h / 2.0) - target).abs()
        })
        .collect();
    let halving = errs.windows(2).all(|w| w[1] < w[0]) && ratios.iter().all(|r| (r - 2.0).abs() <= 0.05);
    out.push(
        "vasicek_terminal_limit",
        halving,
        format!(
            "errors {} ; halving ratios {}",
            errs.iter().map(|e| num(*e)).collect::<Vec<_>>().join(" "),
            ratios.iter().map(|e| num(*e)).collect::<Vec<_>>().join(" ")
        ),
    );
    Ok(out)
}

/// Bond neutralization on the Vasicek model and the first-order expansion
/// of the adjusted risk for several rescalings.
pub fn neutrality_suite(n_paths: usize, n_steps: usize, seed: u64, tolerance_scale: f64) -> Result<SuiteReport> {
    let k = BASE_SE_BAND * tolerance_scale;
    let mut out = SuiteReport::new("neutrality");
    let p = fig2_defaults();
    let spec = fig2::spec(&p);
    let (sol, _) = fig2::bond_solution(&spec, n_paths, n_steps, seed)?;
    let grid = sol.grid;
    let knots: Vec<f64> = (0..grid.n_steps()).map(|kk| grid.time(kk)).collect();
    let curve = RateCurve::new(knots.clone(), knots.iter().map(|t| spec.rate(*t)).collect(), spec.horizon)?;
    let neutral = resilience_neutral_driver(BondDriver { rate: RateSource::State }, curve.clone());
    let shifted = neutral_solution(&sol, &curve);
    let mut bad = Vec::new();
    let mut worst: f64 = 0.0;
    for kk in 0..grid.n_steps() {
        let r = rate_driver_expectation(&neutral, &shifted, At::Index(kk))?;
        let floor = 1e-12 * tolerance_scale;
        if r.value.abs() > k * r.std_error + floor {
            bad.push(num(grid.time(kk)));
        }
        if r.std_error > 0.0 {
            worst = worst.max(r.value.abs() / r.std_error);
        }
    }
    out.push(
        "neutral_rate_zero_all_rows",
        bad.is_empty(),
        if bad.is_empty() {
            format!("{} grid points, largest |rate|/SE {}", grid.n_steps(), num(worst))
        } else {
            format!("outside {k} SE at t = {}", bad.join(" "))
        },
    );

    let s = 0.25 * spec.horizon;
    let s_idx = grid.nearest_index(s);
    let ts = grid.time(s_idx);
    let offsets = [1usize, 2, 4, 8];
    let rate_s = curve.value(ts);
    for c in [0.0, 0.5, 1.0] {
        let rescale = Rescale::Constant(c);
        let adjusted = adjusted_risk_paths(&sol.rho, &grid, &curve, &rescale)?;
        let rep = adjusted_risk_expansion_check(&adjusted, &grid, s_idx, &offsets, c, rate_s)?;
        out.push(
            format!("rra_expansion_mc c={c}"),
            rep.within(k),
            format!("slope {} ± {} vs (1 − c)·rate {}", num(rep.slope), num(rep.slope_se), num(rep.expected_slope)),
        );
        let hs: Vec<f64> = offsets.iter().map(|o| *o as f64 * grid.dt()).collect();
        let ex = expansion_check_exact(&|t| spec.mean_price(t), &curve, &rescale, ts, &hs, rate_s)?;
        let tol = 1e-3 * rate_s.abs();
        out.push(
            format!("rra_expansion_exact c={c}"),
            (ex.slope - ex.expected_slope).abs() <= tol,
            format!("slope {} vs {} (tolerance {})", num(ex.slope), num(ex.expected_slope), num(tol)),
        );
    }
    Ok(out)
}

/// Least-squares backward solution of the put against the Black–Scholes price.
pub fn lsmc_oracle(n_paths: usize, n_steps: usize, seed: u64, tolerance_scale: f64) -> Result<SuiteReport> {
    let mut out = SuiteReport::new("lsmc_oracle");
    let p = fig1_defaults();
    let spec = fig1::spec(&p);
    let grid = make_time_grid(p.horizon, n_steps)?;
    let noise = sample_noise(grid, n_paths, 1, 0.0, seed)?;
    let s = simulate_gbm(grid, p.s0, p.mu, p.sigma, &noise)?;
    let payoff: Vec<f64> = s.terminal().iter().map(|x| (p.strike - x).max(0.0)).collect();
    let sol = lsmc_solve(&LinearMarketDriver::new(p.mu, p.sigma), &payoff, &s, &noise, 4)?;
    let exact = bs_put_price(&spec, 0.0, p.s0)?;
    let y0 = sol.rho.get(0, 0);
    let rel = ((y0 - exact) / exact).abs();
    let tol = 0.01 * tolerance_scale;
    out.push(
        "lsmc_put_value",
        rel <= tol,
        format!("{} vs {} (relative error {}, tolerance {tol}; {n_paths} paths, {n_steps} steps, degree 4)", num(y0), num(exact), num(rel)),
    );
    Ok(out)
}

/// The cheap reductions of every module: zero drift, immediate hits,
/// deterministic rates, empty sweeps, vanishing claims and determinism.
pub fn selftest(tolerance_scale: f64) -> Result<SuiteReport> {
    let k = BASE_SE_BAND * tolerance_scale;
    let mut out = SuiteReport::new("selftest");
    let (paths, steps, seed) = (4_000, 50, 11);

    let mut cfg = sized(ScenarioId::Fig1Put, paths, steps, seed);
    if let ScenarioParams::Fig1Put(p) = &mut cfg.params {
        p.mu = 0.0;
    }
    let rep = run_scenario(&cfg, tolerance_scale)?;
    let zero = rep.rows.iter().all(|r| {
        r.closed_form.map_or(false, |c| c.abs() <= 1e-9)
            && r.driver.as_ref().map_or(false, |d| d.value == 0.0)
            && r.finite_difference.as_ref().map_or(false, |f| f.within(0.0, k))
    });
    out.push("fig1_zero_drift", zero, "all three rate columns vanish when mu = 0");

    let mut cfg = sized(ScenarioId::Fig1Put, paths, steps, seed);
    if let ScenarioParams::Fig1Put(p) = &mut cfg.params {
        p.barrier = 1.0;
    }
    let rep = run_scenario(&cfg, tolerance_scale)?;
    let at_zero = rep.rows[0].driver.clone().expect("driver column");
    let hit = rep.stopping_row("driver_expectation").cloned();
    out.push(
        "fig1_immediate_hit",
        hit.as_ref().map_or(false, |h| (h.value - at_zero.value).abs() <= 1e-9 * at_zero.value.abs().max(1.0) && h.hit_probability == Some(1.0)),
        format!("stopping rate {:?} vs t = 0 rate {}", hit.map(|h| h.value), num(at_zero.value)),
    );

    let v = VasicekBondSpec { r0: 0.02, a: 1.0, b: 0.02, sigma: 0.0, horizon: 1.0 };
    let det = (0..=10).all(|j| {
        let t = j as f64 / 10.0;
        (v.rate(t) - 0.02 * (-0.02 * (1.0 - t)).exp()).abs() <= 1e-15
    });
    out.push("fig2_deterministic_rate", det, "sigma = 0, r0 = b: rate = b·e^{−b(T−t)}");

    let mut cfg = sized(ScenarioId::AppDSweep, 2_000, steps, seed);
    if let ScenarioParams::AppDSweep(p) = &mut cfg.params {
        p.a_grid = vec![1.0];
    }
    let single = match &cfg.params {
        ScenarioParams::AppDSweep(p) => appd::sweep_curves(&cfg, p)?,
        _ => unreachable!(),
    };
    let (ok, detail) = appd::monotone_at(&single, 0);
    out.push("appd_single_curve", ok && single.curves.len() == 1, detail);

    let a = run_scenario(&sized(ScenarioId::AppDSweep, 2_000, steps, seed), tolerance_scale)?;
    let b = run_scenario(&sized(ScenarioId::AppDSweep, 2_000, steps, seed), tolerance_scale)?;
    let same = a.rates_csv() == b.rates_csv()
        && a.tables.iter().zip(&b.tables).all(|(x, y)| x.to_csv() == y.to_csv());
    out.push("appd_deterministic_bytes", same, "same seed, identical CSV bytes");

    let rep = run_scenario(&sized(ScenarioId::Ex55Martingale, paths, steps, seed), tolerance_scale)?;
    out.push("ex55_zero_rates", rep.all_passed(), "driver and finite difference within SE of 0");

    let z = vec![0.0; 10];
    let e = entropic_rate_brownian(1.0, &z, Instant::Time(0.0))?;
    out.push("entropic_zero_exposure", e.value == 0.0, "c = 0 gives rate 0");

    let d = EntropicBrownianDriver { gamma: 2.0 }.evaluate(0.0, 0.0, &[1.0], 0.0, 0.0);
    out.push("entropic_driver_unit", d == 1.0, format!("g(z = 1, gamma = 2) = {}", num(d)));

    let zero_x = vec![0.0; 10];
    let fns = (DeterministicFn::Constant(0.01), DeterministicFn::Constant(0.03));
    let (_, r) = ambiguous_rate_value_and_rate(&fns.0, &fns.1, &zero_x, 0.0, 1.0)?;
    out.push("ambiguous_zero_claim", r.value == 0.0, "X = 0 gives rate 0");

    let call = crate::scenarios::ex56::spec(&match ScenarioConfig::defaults(ScenarioId::Ex56JumpCall).params {
        ScenarioParams::Ex56JumpCall(p) => crate::config::JumpCallParams { mu: 0.0, ..p },
        _ => unreachable!(),
    });
    let j = jump_market_rate(&call, 0.0, 1_000, seed)?;
    out.push("jump_call_zero_drift", j.value == 0.0, "mu = 0 gives rate 0");

    Ok(out)
}
