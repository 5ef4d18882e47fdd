use bsde_engine::{rate_driver_expectation, At, BondDriver, RateEstimate, RateSource};
use risk_closed_forms::VasicekBondSpec;

use crate::config::SweepParams;
use crate::report::{num, Check, PlotSpec, RateRow, ScenarioReport, Table};
use crate::scenarios::fig2::bond_solution;
use crate::{Result, ScenarioConfig, ScenarioId};

/// Driver-expectation rate curves, one per mean-reversion speed, on common noise.
pub struct SweepCurves {
    pub a_grid: Vec<f64>,
    pub times: Vec<f64>,
    /// `curves[j][k]`: estimate for `a_grid[j]` at `times[k]`.
    pub curves: Vec<Vec<RateEstimate>>,
    pub closed: Vec<Vec<f64>>,
}

pub fn sweep_curves(cfg: &ScenarioConfig, p: &SweepParams) -> Result<SweepCurves> {
    let driver = BondDriver { rate: RateSource::State };
    let mut curves = Vec::new();
    let mut closed = Vec::new();
    let mut times = Vec::new();
    for &a in &p.a_grid {
        let spec = VasicekBondSpec { r0: p.r0, a, b: p.b, sigma: p.sigma, horizon: p.horizon };
        let (sol, _) = bond_solution(&spec, cfg.n_paths, cfg.n_steps, cfg.seed)?;
        times = (0..sol.grid.n_steps()).map(|k| sol.grid.time(k)).collect();
        curves.push(
            (0..sol.grid.n_steps())
                .map(|k| rate_driver_expectation(&driver, &sol, At::Index(k)))
                .collect::<bsde_engine::Result<Vec<_>>>()?,
        );
        closed.push(times.iter().map(|t| spec.rate(*t)).collect());
    }
    Ok(SweepCurves { a_grid: p.a_grid.clone(), times, curves, closed })
}

/// `|rate|` nondecreasing in `a` at grid index `k`, each adjacent pair allowed a slack of one combined SE.
pub fn monotone_at(s: &SweepCurves, k: usize) -> (bool, String) {
    let mut ok = true;
    let mut detail = Vec::new();
    for j in 0..s.a_grid.len().saturating_sub(1) {
        let (lo, hi) = (&s.curves[j][k], &s.curves[j + 1][k]);
        let pass = hi.value.abs() >= lo.value.abs() - lo.combined_se(hi);
        ok &= pass;
        detail.push(format!(
            "a {}→{}: |{}| → |{}| ({})",
            num(s.a_grid[j]),
            num(s.a_grid[j + 1]),
            num(lo.value),
            num(hi.value),
            if pass { "ok" } else { "decreasing" }
        ));
    }
    if s.a_grid.len() < 2 {
        detail.push("single curve, no comparison".into());
    }
    (ok, detail.join("; "))
}

pub(crate) fn run(cfg: &ScenarioConfig, p: &SweepParams, k: f64) -> Result<ScenarioReport> {
    let s = sweep_curves(cfg, p)?;
    let mut report = ScenarioReport::new(
        ScenarioId::AppDSweep,
        PlotSpec {
            title: "Bond resilience rate across mean-reversion speeds".into(),
            x_label: "t [years]".into(),
            y_label: "rate [€/year]".into(),
            series: vec![
                ("sweep.csv".into(), "closed_form and driver_mc against t, one series per a".into()),
                ("rates.csv".into(), "first entry of the a grid".into()),
            ],
        },
    );
    report.rows = s.times.iter().enumerate()
        .map(|(kk, t)| RateRow {
            t: *t,
            closed_form: Some(s.closed[0][kk]),
            driver: Some(s.curves[0][kk].clone()),
            finite_difference: None,
        })
        .collect();

    let mut table = Table::new("sweep", &["a", "t", "closed_form", "driver_mc", "driver_se"]);
    for (j, a) in s.a_grid.iter().enumerate() {
        let mut outside = 0;
        for (kk, t) in s.times.iter().enumerate() {
            let e = &s.curves[j][kk];
            table.push(vec![num(*a), num(*t), num(s.closed[j][kk]), num(e.value), num(e.std_error)]);
            if !e.within(s.closed[j][kk], k) {
                outside += 1;
            }
        }
        report.checks.push(Check::new(
            format!("closed_vs_driver_all_rows:a={}", num(*a)),
            outside == 0,
            format!("{outside} of {} rows outside {k} SE", s.times.len()),
        ));
    }
    report.tables.push(table);

    let grid_dt = p.horizon / cfg.n_steps as f64;
    for f in &p.check_fractions {
        let kk = ((f * p.horizon / grid_dt).round() as usize).min(s.times.len() - 1);
        let (ok, detail) = monotone_at(&s, kk);
        report.checks.push(Check::new(format!("abs_rate_nondecreasing_in_a@t={}", num(s.times[kk])), ok, detail));
    }
    Ok(report)
}
