use bsde_engine::{LinearMarketDriver, SolutionSample};
use risk_closed_forms::{bs_put_mean_price, bs_put_price, bs_put_rate_t, bs_put_z, BsPutSpec};
use stochastic_core::stats::MeanSe;
use stochastic_core::{first_hitting, make_time_grid, sample_noise, simulate_gbm, Direction};

use crate::common::{agree, rate_rows, relative, row_checks, stopping_rows};
use crate::config::Fig1Params;
use crate::report::{num, PlotSpec, ScenarioReport, Table};
use crate::{Result, ScenarioConfig, ScenarioId};

/// Reference stopping-time rate at the default parameters, €/year.
pub const REFERENCE_STOPPING_RATE: f64 = -78.0;

pub(crate) fn spec(p: &Fig1Params) -> BsPutSpec {
    BsPutSpec { s0: p.s0, strike: p.strike, mu: p.mu, sigma: p.sigma, horizon: p.horizon }
}

/// Put price paths and exposures on a simulated GBM ensemble.
pub fn put_solution(cfg: &ScenarioConfig, p: &Fig1Params) -> Result<SolutionSample> {
    let spec = spec(p);
    let grid = make_time_grid(p.horizon, cfg.n_steps)?;
    let noise = sample_noise(grid, cfg.n_paths, 1, 0.0, cfg.seed)?;
    let s = simulate_gbm(grid, p.s0, p.mu, p.sigma, &noise)?;
    let times = grid.times();
    let v = s.values.map(|k, x| bs_put_price(&spec, times[k], x).expect("validated put inputs"));
    let z = s.values.map(|k, x| bs_put_z(&spec, times[k], x));
    Ok(SolutionSample::new(grid, v, vec![z], None, Some(s.values))?)
}

pub(crate) fn run(cfg: &ScenarioConfig, p: &Fig1Params, k: f64, scale: f64) -> Result<ScenarioReport> {
    let spec = spec(p);
    let sol = put_solution(cfg, p)?;
    let driver = LinearMarketDriver::new(p.mu, p.sigma);
    let mut report = ScenarioReport::new(
        ScenarioId::Fig1Put,
        PlotSpec {
            title: "Put option price: resilience rate and mean trajectory".into(),
            x_label: "t [years]".into(),
            y_label: "rate [€/year]; mean price [€]".into(),
            series: vec![
                ("rates.csv".into(), "closed_form, driver_mc, fd_mc against t".into()),
                ("mean_path.csv".into(), "mean_mc, closed_form against t".into()),
                ("stopping.csv".into(), "rate at first passage of the price above the barrier".into()),
            ],
        },
    );
    report.rows = rate_rows(&sol, &driver, &|t| bs_put_rate_t(&spec, t).ok(), true)?;
    row_checks(&mut report, k, "");

    let tau = first_hitting(&sol.rho, sol.grid, p.barrier, Direction::Above)?;
    if let Some((d, f)) = stopping_rows(&mut report, &sol, &driver, &tau, "")? {
        report.checks.push(agree("driver_vs_fd@tau".into(), &d, &f, k));
        if cfg.has_default_params() {
            report.checks.push(relative("reference_stopping_rate".into(), d.value, REFERENCE_STOPPING_RATE, 0.05 * scale));
        }
    }

    let mut mean = Table::new("mean_path", &["t", "mean_mc", "mean_se", "closed_form"]);
    for kk in 0..sol.grid.n_points() {
        let t = sol.grid.time(kk);
        let m = MeanSe::of(&sol.rho.column(kk));
        mean.push(vec![num(t), num(m.mean), num(m.se), num(bs_put_mean_price(&spec, t)?)]);
    }
    report.tables.push(mean);
    Ok(report)
}
