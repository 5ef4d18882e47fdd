use bsde_engine::{SolutionSample, ZeroDriver};
use stochastic_core::{first_hitting, make_time_grid, sample_noise, Direction, PathMatrix};

use crate::common::{agree, near, rate_rows, row_checks, stopping_rows};
use crate::config::MartingaleParams;
use crate::report::{PlotSpec, ScenarioReport};
use crate::{Result, ScenarioConfig, ScenarioId};

/// `x0 + σW_t + β(N_t − λt)` with exposures `Z = σ`, `U = β`.
pub fn martingale_solution(cfg: &ScenarioConfig, p: &MartingaleParams) -> Result<SolutionSample> {
    let grid = make_time_grid(p.horizon, cfg.n_steps)?;
    let noise = sample_noise(grid, cfg.n_paths, 1, p.jump_rate, cfg.seed)?;
    let dt = grid.dt();
    let rho = PathMatrix::from_rows(cfg.n_paths, grid.n_points(), |i, row| {
        let mut x = p.x0;
        row[0] = x;
        for k in 0..grid.n_steps() {
            x += p.sigma * noise.dw(i, k, 0) + p.jump_size * (noise.count(i, k) as f64 - p.jump_rate * dt);
            row[k + 1] = x;
        }
    });
    let z = rho.map(|_, _| p.sigma);
    let u = rho.map(|_, _| p.jump_size);
    Ok(SolutionSample::new(grid, rho, vec![z], Some(u), None)?)
}

pub(crate) fn run(cfg: &ScenarioConfig, p: &MartingaleParams, k: f64) -> Result<ScenarioReport> {
    let sol = martingale_solution(cfg, p)?;
    let mut report = ScenarioReport::new(
        ScenarioId::Ex55Martingale,
        PlotSpec {
            title: "Conditional expectation driven by Brownian and Poisson noise".into(),
            x_label: "t [years]".into(),
            y_label: "rate [€/year]".into(),
            series: vec![("rates.csv".into(), "closed_form (zero), driver_mc, fd_mc against t".into())],
        },
    );
    report.rows = rate_rows(&sol, &ZeroDriver, &|_| Some(0.0), true)?;
    row_checks(&mut report, k, "");
    let tau = first_hitting(&sol.rho, sol.grid, p.barrier, Direction::Above)?;
    if let Some((d, f)) = stopping_rows(&mut report, &sol, &ZeroDriver, &tau, "")? {
        report.checks.push(agree("driver_vs_fd@tau".into(), &d, &f, k));
        report.checks.push(near("fd_zero@tau".into(), &f, 0.0, k));
    }
    Ok(report)
}
