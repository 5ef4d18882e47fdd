use bsde_engine::{ambiguous_rate_value_and_rate, AmbiguousRateDriver, SolutionSample};
use risk_closed_forms::DeterministicFn;
use stochastic_core::{first_hitting, make_time_grid, sample_noise, simulate_gbm, Direction};

use crate::common::{agree, near, rate_rows, row_checks, stopping_rows};
use crate::config::AmbiguousParams;
use crate::report::{num, PlotSpec, RateRow, ScenarioReport, Table};
use crate::{Result, ScenarioConfig, ScenarioId};

/// Risk paths of `sign·S_T`: the claim is discounted at the lending rate when
/// long and at the borrowing rate when short.
pub fn position_solution(cfg: &ScenarioConfig, p: &AmbiguousParams, sign: f64) -> Result<(SolutionSample, Vec<f64>)> {
    let grid = make_time_grid(p.horizon, cfg.n_steps)?;
    let noise = sample_noise(grid, cfg.n_paths, 1, 0.0, cfg.seed)?;
    let s = simulate_gbm(grid, p.s0, p.mu, p.sigma, &noise)?;
    let rate = if sign >= 0.0 { p.lending } else { p.borrowing };
    let times = grid.times();
    let rho = s.values.map(|k, x| sign * x * ((p.mu - rate) * (p.horizon - times[k])).exp());
    let z = rho.map(|_, v| p.sigma * v);
    let payoff: Vec<f64> = s.terminal().iter().map(|x| sign * x).collect();
    Ok((SolutionSample::new(grid, rho, vec![z], None, None)?, payoff))
}

pub fn closed_rate(p: &AmbiguousParams, sign: f64, t: f64) -> f64 {
    let rate = if sign >= 0.0 { p.lending } else { p.borrowing };
    sign * rate * p.s0 * (p.mu * t + (p.mu - rate) * (p.horizon - t)).exp()
}

fn rows_table(name: &str, rows: &[RateRow]) -> Table {
    let mut t = Table::new(name, &["t", "closed_form", "driver_mc", "driver_se", "fd_mc", "fd_se"]);
    for r in rows {
        let d = r.driver.as_ref().expect("driver column");
        let f = r.finite_difference.as_ref().expect("fd column");
        t.push(vec![
            num(r.t),
            r.closed_form.map_or("NA".into(), num),
            num(d.value),
            num(d.std_error),
            num(f.value),
            num(f.std_error),
        ]);
    }
    t
}

pub(crate) fn run(cfg: &ScenarioConfig, p: &AmbiguousParams, k: f64) -> Result<ScenarioReport> {
    let driver = AmbiguousRateDriver::new(
        DeterministicFn::Constant(p.lending),
        DeterministicFn::Constant(p.borrowing),
        p.horizon,
    );
    let mut report = ScenarioReport::new(
        ScenarioId::Ex53Ambiguous,
        PlotSpec {
            title: "Separate lending and borrowing rates".into(),
            x_label: "t [years]".into(),
            y_label: "rate [€/year]".into(),
            series: vec![
                ("rates.csv".into(), "long position S_T".into()),
                ("short_rates.csv".into(), "short position -S_T".into()),
                ("payoff_formula.csv".into(), "rate from terminal payoff samples".into()),
            ],
        },
    );
    let (long, long_payoff) = position_solution(cfg, p, 1.0)?;
    report.rows = rate_rows(&long, &driver, &|t| Some(closed_rate(p, 1.0, t)), true)?;
    row_checks(&mut report, k, "");
    let (short, short_payoff) = position_solution(cfg, p, -1.0)?;
    let short_rows = rate_rows(&short, &driver, &|t| Some(closed_rate(p, -1.0, t)), true)?;
    let mut short_report = ScenarioReport::new(ScenarioId::Ex53Ambiguous, PlotSpec::default());
    short_report.rows = short_rows;
    row_checks(&mut short_report, k, ":short");
    report.checks.extend(short_report.checks);
    report.tables.push(rows_table("short_rates", &short_report.rows));

    let tau = first_hitting(&long.rho, long.grid, p.barrier, Direction::Above)?;
    if let Some((d, f)) = stopping_rows(&mut report, &long, &driver, &tau, "")? {
        report.checks.push(agree("driver_vs_fd@tau".into(), &d, &f, k));
    }

    let lending = DeterministicFn::Constant(p.lending);
    let borrowing = DeterministicFn::Constant(p.borrowing);
    let mut formula = Table::new("payoff_formula", &["position", "t", "value", "rate", "rate_se", "closed_form"]);
    for (label, sign, payoff) in [("long", 1.0, &long_payoff), ("short", -1.0, &short_payoff)] {
        for f in [0.0, 0.25, 0.5, 0.75] {
            let t = f * p.horizon;
            let (v, r) = ambiguous_rate_value_and_rate(&lending, &borrowing, payoff, t, p.horizon)?;
            let c = closed_rate(p, sign, t);
            formula.push(vec![label.into(), num(t), num(v), num(r.value), num(r.std_error), num(c)]);
            report.checks.push(near(format!("payoff_formula_vs_closed:{label}@t={}", num(t)), &r, c, k));
        }
    }
    report.tables.push(formula);
    Ok(report)
}
