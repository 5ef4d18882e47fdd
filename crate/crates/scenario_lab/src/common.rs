use bsde_engine::{
    default_epsilons, rate_driver_expectation, rate_finite_difference, At, Driver, EngineError, RateEstimate,
    SolutionSample,
};
use stochastic_core::StoppingSample;

use crate::report::{num, Check, RateRow, ScenarioReport, StoppingRow};
use crate::Result;

/// Driver-expectation and finite-difference rates at every grid point before `T`.
pub(crate) fn rate_rows(
    sol: &SolutionSample,
    driver: &dyn Driver,
    closed: &dyn Fn(f64) -> Option<f64>,
    with_fd: bool,
) -> Result<Vec<RateRow>> {
    let grid = sol.grid;
    let eps = default_epsilons(&grid);
    (0..grid.n_steps())
        .map(|k| {
            let t = grid.time(k);
            let fd = if with_fd { Some(rate_finite_difference(&sol.rho, &grid, At::Index(k), &eps)?) } else { None };
            Ok(RateRow {
                t,
                closed_form: closed(t),
                driver: Some(rate_driver_expectation(driver, sol, At::Index(k))?),
                finite_difference: fd,
            })
        })
        .collect()
}

/// Both estimators at the stopping time; a failing check instead of rows when nothing hits.
pub(crate) fn stopping_rows(
    report: &mut ScenarioReport,
    sol: &SolutionSample,
    driver: &dyn Driver,
    tau: &StoppingSample,
    suffix: &str,
) -> Result<Option<(RateEstimate, RateEstimate)>> {
    let label = |m: &str| if suffix.is_empty() { m.to_string() } else { format!("{m}:{suffix}") };
    let d = match rate_driver_expectation(driver, sol, At::Stopping(tau)) {
        Err(EngineError::EmptyConditioning) => {
            report.checks.push(Check::new(label("stopping_hits"), false, "no path reached the barrier"));
            return Ok(None);
        }
        other => other?,
    };
    let f = rate_finite_difference(&sol.rho, &sol.grid, At::Stopping(tau), &default_epsilons(&sol.grid))?;
    report.stopping.push(StoppingRow { method: label("driver_expectation"), estimate: d.clone() });
    report.stopping.push(StoppingRow { method: label("finite_difference"), estimate: f.clone() });
    Ok(Some((d, f)))
}

pub(crate) fn agree(name: String, a: &RateEstimate, b: &RateEstimate, k: f64) -> Check {
    let n = a.n_samples.min(b.n_samples);
    if n < 2 {
        return Check::new(
            name,
            false,
            format!("{} vs {} from {n} sample(s): standard error undefined", num(a.value), num(b.value)),
        );
    }
    let se = a.combined_se(b);
    Check::new(
        name,
        (a.value - b.value).abs() <= k * se,
        format!("{} vs {} (combined se {}, k {k})", num(a.value), num(b.value), num(se)),
    )
}

/// `|value − target| ≤ k·se`, plus a rounding floor for deterministic states where se = 0.
pub(crate) fn close_to(est: &RateEstimate, target: f64, k: f64) -> bool {
    (est.value - target).abs() <= k * est.std_error + ROUNDING * target.abs().max(1.0)
}

const ROUNDING: f64 = 1e-12;

pub(crate) fn near(name: String, est: &RateEstimate, target: f64, k: f64) -> Check {
    Check::new(
        name,
        close_to(est, target, k),
        format!("{} ± {} vs {} (k {k})", num(est.value), num(est.std_error), num(target)),
    )
}

pub(crate) fn relative(name: String, value: f64, target: f64, tol: f64) -> Check {
    let rel = ((value - target) / target).abs();
    Check::new(name, rel <= tol, format!("{} vs {} (relative error {}, tol {tol})", num(value), num(target), num(rel)))
}

/// Per-row checks: closed form vs driver MC, and driver vs finite difference.
pub(crate) fn row_checks(report: &mut ScenarioReport, k: f64, tag: &str) {
    let mut closed_fail = Vec::new();
    let mut dual_fail = Vec::new();
    let (mut closed_n, mut dual_n) = (0, 0);
    for r in &report.rows {
        if let (Some(c), Some(d)) = (r.closed_form, &r.driver) {
            closed_n += 1;
            if !close_to(d, c, k) {
                closed_fail.push(num(r.t));
            }
        }
        if let (Some(d), Some(f)) = (&r.driver, &r.finite_difference) {
            dual_n += 1;
            if !d.agrees_with(f, k) {
                dual_fail.push(num(r.t));
            }
        }
    }
    let summary = |n: usize, f: &[String]| {
        if f.is_empty() {
            format!("{n} rows within {k} SE")
        } else {
            format!("{} of {n} rows outside {k} SE at t = {}", f.len(), f.join(" "))
        }
    };
    if closed_n > 0 {
        report.checks.push(Check::new(format!("closed_vs_driver_all_rows{tag}"), closed_fail.is_empty(), summary(closed_n, &closed_fail)));
    }
    if dual_n > 0 {
        report.checks.push(Check::new(format!("driver_vs_fd_all_rows{tag}"), dual_fail.is_empty(), summary(dual_n, &dual_fail)));
    }
}
