use bsde_engine::{entropic_rate_brownian, EntropicBrownianDriver, Instant, SolutionSample};
use risk_closed_forms::quadrature::gaussian_expectation;
use stochastic_core::{first_hitting, make_time_grid, sample_noise, simulate_arithmetic, Direction, PathMatrix};

use crate::common::{agree, rate_rows, row_checks, stopping_rows};
use crate::config::EntropicBrownianParams;
use crate::report::{num, Check, PlotSpec, ScenarioReport, Table};
use crate::{Result, ScenarioConfig, ScenarioId};

/// Entropic risk `cW_t + γc²(T−t)/2` of `X = cW_T` with exposure `Z ≡ c`.
pub fn linear_claim_solution(w: &PathMatrix, grid: stochastic_core::TimeGrid, c: f64, gamma: f64) -> Result<SolutionSample> {
    let times = grid.times();
    let horizon = grid.horizon();
    let rho = w.map(|k, x| c * x + 0.5 * gamma * c * c * (horizon - times[k]));
    let z = w.map(|_, _| c);
    Ok(SolutionSample::new(grid, rho, vec![z], None, None)?)
}

/// Slope of `t ↦ E[(1/γ)·ln E[e^{γcW_T} | W_t]]` over `times`, each mean computed
/// by nested Gaussian quadrature, fitted by least squares.
pub fn quadrature_rate(c: f64, gamma: f64, horizon: f64, times: &[f64]) -> Result<f64> {
    let mean_value = |t: f64| -> Result<f64> {
        let tail = (horizon - t).sqrt();
        let outer = gaussian_expectation(
            |eta| {
                let w = t.sqrt() * eta;
                let m = gaussian_expectation(|xi| (gamma * c * (w + tail * xi)).exp(), 1e-14).unwrap_or(f64::NAN);
                m.ln() / gamma
            },
            1e-13,
        )?;
        Ok(outer)
    };
    let ys = times.iter().map(|t| mean_value(*t)).collect::<Result<Vec<_>>>()?;
    let n = times.len() as f64;
    let (mt, my) = (times.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = times.iter().zip(&ys).map(|(t, y)| (t - mt) * (y - my)).sum();
    let sxx: f64 = times.iter().map(|t| (t - mt).powi(2)).sum();
    Ok(sxy / sxx)
}

pub(crate) fn run(cfg: &ScenarioConfig, p: &EntropicBrownianParams, k: f64) -> Result<ScenarioReport> {
    let grid = make_time_grid(p.horizon, cfg.n_steps)?;
    let noise = sample_noise(grid, cfg.n_paths, 1, 0.0, cfg.seed)?;
    let w = simulate_arithmetic(grid, 0.0, 0.0, 1.0, &noise)?.values;
    let mut report = ScenarioReport::new(
        ScenarioId::Ex54EntropicBrownian,
        PlotSpec {
            title: "Entropic risk of c W_T".into(),
            x_label: "t [years]".into(),
            y_label: "rate [€/year]".into(),
            series: vec![
                ("rates.csv".into(), "first entry of the gamma grid".into()),
                ("gamma_sweep.csv".into(), "rates per risk aversion".into()),
            ],
        },
    );
    let mut sweep = Table::new("gamma_sweep", &["gamma", "closed_form", "driver_mc", "driver_se", "fd_t0", "fd_se_t0", "quadrature"]);
    let mut previous: Option<(f64, f64)> = None;
    for (j, &gamma) in p.gamma_grid.iter().enumerate() {
        let sol = linear_claim_solution(&w, grid, p.c, gamma)?;
        let driver = EntropicBrownianDriver { gamma };
        let exact = -0.5 * gamma * p.c * p.c;
        let rows = rate_rows(&sol, &driver, &|_| Some(exact), true)?;
        let mut part = ScenarioReport::new(ScenarioId::Ex54EntropicBrownian, PlotSpec::default());
        part.rows = rows;
        let tag = format!(":gamma={}", num(gamma));
        row_checks(&mut part, k, &tag);
        let tau = first_hitting(&sol.rho, grid, p.barrier, Direction::Above)?;
        if let Some((d, f)) = stopping_rows(&mut part, &sol, &driver, &tau, &format!("gamma={}", num(gamma)))? {
            part.checks.push(agree(format!("driver_vs_fd@tau{tag}"), &d, &f, k));
        }
        let mc = entropic_rate_brownian(gamma, &sol.z[0].column(0), Instant::Time(0.0))?;
        let quad = quadrature_rate(p.c, gamma, p.horizon, &[0.1, 0.2, 0.3, 0.4, 0.5].map(|f| f * p.horizon))?;
        part.checks.push(Check::new(
            format!("quadrature_rate_exact{tag}"),
            (quad - exact).abs() <= 1e-10 * (1.0 + exact.abs()),
            format!("{} vs {}", num(quad), num(exact)),
        ));
        let fd0 = part.rows[0].finite_difference.clone().expect("fd column");
        sweep.push(vec![num(gamma), num(exact), num(mc.value), num(mc.std_error), num(fd0.value), num(fd0.std_error), num(quad)]);
        if let Some((g_prev, r_prev)) = previous {
            part.checks.push(Check::new(
                format!("more_negative_in_gamma{tag}"),
                mc.value < r_prev,
                format!("gamma {} → {}: {} → {}", num(g_prev), num(gamma), num(r_prev), num(mc.value)),
            ));
        }
        previous = Some((gamma, mc.value));
        if j == 0 {
            report.rows = part.rows;
        }
        report.stopping.extend(part.stopping);
        report.checks.extend(part.checks);
    }
    report.tables.push(sweep);
    Ok(report)
}
