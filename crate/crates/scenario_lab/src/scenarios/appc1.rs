use bsde_engine::{LinearMarketDriver, SolutionSample};
use risk_closed_forms::{exp_payoff_rate, exp_payoff_rate_replicating, exp_payoff_value, exp_payoff_z, ExpPayoffSpec};
use stochastic_core::{first_hitting, make_time_grid, sample_noise, simulate_arithmetic, Direction};

use crate::common::{agree, rate_rows, row_checks, stopping_rows};
use crate::config::ExpPayoffParams;
use crate::report::{num, PlotSpec, ScenarioReport, Table};
use crate::{Result, ScenarioConfig, ScenarioId};

pub(crate) fn run(cfg: &ScenarioConfig, p: &ExpPayoffParams, k: f64) -> Result<ScenarioReport> {
    let spec = ExpPayoffSpec { mu: p.mu, sigma: p.sigma, horizon: p.horizon };
    let grid = make_time_grid(p.horizon, cfg.n_steps)?;
    let noise = sample_noise(grid, cfg.n_paths, 1, 0.0, cfg.seed)?;
    let w = simulate_arithmetic(grid, 0.0, 0.0, 1.0, &noise)?.values;
    let times = grid.times();
    let v = w.map(|kk, x| exp_payoff_value(&spec, times[kk], x));
    let z = w.map(|kk, x| exp_payoff_z(&spec, times[kk], x));
    let sol = SolutionSample::new(grid, v, vec![z], None, None)?;
    let driver = LinearMarketDriver::new(p.mu, p.sigma);

    let mut report = ScenarioReport::new(
        ScenarioId::AppC1ExpPayoff,
        PlotSpec {
            title: "Replicating portfolio of exp(sigma W_T)".into(),
            x_label: "t [years]".into(),
            y_label: "rate [€/year]".into(),
            series: vec![
                ("rates.csv".into(), "closed_form (replicating), driver_mc, fd_mc against t".into()),
                ("scaled_formula.csv".into(), "scaled and replicating closed forms against t".into()),
            ],
        },
    );
    report.rows = rate_rows(&sol, &driver, &|t| exp_payoff_rate_replicating(&spec, t).ok(), true)?;
    row_checks(&mut report, k, "");

    let tau = first_hitting(&sol.rho, grid, p.barrier, Direction::Above)?;
    if let Some((d, f)) = stopping_rows(&mut report, &sol, &driver, &tau, "")? {
        report.checks.push(agree("driver_vs_fd@tau".into(), &d, &f, k));
    }

    let mut scaled = Table::new("scaled_formula", &["t", "scaled", "replicating", "ratio"]);
    for kk in 0..grid.n_steps() {
        let t = grid.time(kk);
        let (a, b) = (exp_payoff_rate(&spec, t)?, exp_payoff_rate_replicating(&spec, t)?);
        scaled.push(vec![num(t), num(a), num(b), num(a / b)]);
    }
    report.tables.push(scaled);
    Ok(report)
}
