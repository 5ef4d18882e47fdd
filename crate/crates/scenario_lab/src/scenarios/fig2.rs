use bsde_engine::{
    default_epsilons, rate_driver_expectation, rate_finite_difference, At, BondDriver, RateEstimate, RateSource,
    SolutionSample,
};
use risk_closed_forms::VasicekBondSpec;
use stochastic_core::stats::MeanSe;
use stochastic_core::rng::derive_seed;
use stochastic_core::{
    first_hitting, make_time_grid, sample_noise, simulate_vasicek, Direction, PathMatrix, StoppingSample,
};

use crate::common::{agree, rate_rows, relative, row_checks, stopping_rows};
use crate::config::Fig2Params;
use crate::report::{num, Check, PlotSpec, ScenarioReport, Table};
use crate::{Result, ScenarioConfig, ScenarioId};

/// Reference stopping-time rate at the default parameters, €/year.
pub const REFERENCE_STOPPING_RATE: f64 = 0.050;

pub fn spec(p: &Fig2Params) -> VasicekBondSpec {
    VasicekBondSpec { r0: p.r0, a: p.a, b: p.b, sigma: p.sigma, horizon: p.horizon }
}

/// Bond price paths, exposures and short-rate state, plus the short-rate paths.
pub fn bond_solution(spec: &VasicekBondSpec, n_paths: usize, n_steps: usize, seed: u64) -> Result<(SolutionSample, PathMatrix)> {
    let grid = make_time_grid(spec.horizon, n_steps)?;
    let noise = sample_noise(grid, n_paths, 1, 0.0, seed)?;
    let r = simulate_vasicek(grid, spec.r0, spec.a, spec.b, spec.sigma, &noise)?;
    let times = grid.times();
    let p = r.values.map(|k, x| spec.price(times[k], x));
    let z = r.values.map(|k, x| spec.z(times[k], x));
    Ok((SolutionSample::new(grid, p, vec![z], None, Some(r.values.clone()))?, r.values))
}

/// Stopping-time estimates pooled over many independent batches of paths,
/// keeping only the rows that hit. Batch 0 reuses `seed`, so it contains the
/// hits of the single-batch scenario run.
#[derive(Debug, Clone)]
pub struct PooledStopping {
    pub driver: RateEstimate,
    pub finite_difference: RateEstimate,
    pub n_paths: usize,
    pub n_hits: usize,
}

pub fn pooled_stopping(
    spec: &VasicekBondSpec,
    barrier: f64,
    n_steps: usize,
    seed: u64,
    total_paths: usize,
    batch: usize,
) -> Result<Option<PooledStopping>> {
    let grid = make_time_grid(spec.horizon, n_steps)?;
    let mut rows: Vec<f64> = Vec::new();
    let mut stops: Vec<usize> = Vec::new();
    let mut done = 0;
    let mut b = 0u64;
    while done < total_paths {
        let n = batch.min(total_paths - done);
        let s = if b == 0 { seed } else { derive_seed(seed, b) };
        let noise = sample_noise(grid, n, 1, 0.0, s)?;
        let r = simulate_vasicek(grid, spec.r0, spec.a, spec.b, spec.sigma, &noise)?;
        let tau = first_hitting(&r.values, grid, barrier, Direction::Above)?;
        for (i, k) in tau.hits() {
            rows.extend_from_slice(r.values.row(i));
            stops.push(k);
        }
        done += n;
        b += 1;
    }
    let n_hits = stops.len();
    if n_hits == 0 {
        return Ok(None);
    }
    let times = grid.times();
    let r = PathMatrix::from_vec(n_hits, grid.n_points(), rows);
    let p = r.map(|k, x| spec.price(times[k], x));
    let z = r.map(|k, x| spec.z(times[k], x));
    let sol = SolutionSample::new(grid, p, vec![z], None, Some(r))?;
    let tau = StoppingSample {
        grid,
        tau: stops.iter().map(|k| grid.time(*k)).collect(),
        hit: vec![true; n_hits],
        hit_index: stops.iter().map(|k| Some(*k)).collect(),
    };
    let prob = Some(n_hits as f64 / total_paths as f64);
    let mut driver = rate_driver_expectation(&BondDriver { rate: RateSource::State }, &sol, At::Stopping(&tau))?;
    let mut fd = rate_finite_difference(&sol.rho, &grid, At::Stopping(&tau), &default_epsilons(&grid))?;
    driver.hit_probability = prob;
    fd.hit_probability = prob;
    Ok(Some(PooledStopping { driver, finite_difference: fd, n_paths: total_paths, n_hits }))
}

pub(crate) fn run(cfg: &ScenarioConfig, p: &Fig2Params, k: f64, scale: f64) -> Result<ScenarioReport> {
    let spec = spec(p);
    let (sol, r) = bond_solution(&spec, cfg.n_paths, cfg.n_steps, cfg.seed)?;
    let driver = BondDriver { rate: RateSource::State };
    let mut report = ScenarioReport::new(
        ScenarioId::Fig2Vasicek,
        PlotSpec {
            title: "Zero-coupon bond under a Vasicek short rate".into(),
            x_label: "t [years]".into(),
            y_label: "rate [€/year]; mean price [€]".into(),
            series: vec![
                ("rates.csv".into(), "closed_form, driver_mc, fd_mc against t".into()),
                ("mean_path.csv".into(), "mean_mc, closed_form against t".into()),
                ("stopping.csv".into(), "rate at first passage of r above the barrier".into()),
            ],
        },
    );
    report.rows = rate_rows(&sol, &driver, &|t| Some(spec.rate(t)), true)?;
    row_checks(&mut report, k, "");

    let tau = first_hitting(&r, sol.grid, p.barrier, Direction::Above)?;
    if let Some((d, f)) = stopping_rows(&mut report, &sol, &driver, &tau, "")? {
        report.checks.push(agree("driver_vs_fd@tau".into(), &d, &f, k));
        if cfg.has_default_params() {
            report.checks.push(relative("reference_stopping_rate".into(), d.value, REFERENCE_STOPPING_RATE, 0.10 * scale));
        }
    }

    let near_maturity = spec.rate(p.horizon * (1.0 - 1e-9));
    let mu_t = spec.mean(p.horizon);
    report.checks.push(Check::new(
        "rate_tends_to_mean_rate",
        (near_maturity - mu_t).abs() <= 1e-9 * (1.0 + mu_t.abs()),
        format!("rate(T-) = {} vs mean rate {}", num(near_maturity), num(mu_t)),
    ));

    let mut mean = Table::new("mean_path", &["t", "mean_mc", "mean_se", "closed_form"]);
    for kk in 0..sol.grid.n_points() {
        let t = sol.grid.time(kk);
        let m = MeanSe::of(&sol.rho.column(kk));
        mean.push(vec![num(t), num(m.mean), num(m.se), num(spec.mean_price(t))]);
    }
    report.tables.push(mean);
    Ok(report)
}
