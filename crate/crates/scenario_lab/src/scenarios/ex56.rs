use bsde_engine::{jump_market_rate, jump_market_rate_series, JumpCallSpec};
use stochastic_core::rng::derive_seed;

use crate::common::near;
use crate::config::JumpCallParams;
use crate::report::{num, PlotSpec, RateRow, ScenarioReport, Table};
use crate::{Result, ScenarioConfig, ScenarioId};

pub(crate) fn spec(p: &JumpCallParams) -> JumpCallSpec {
    JumpCallSpec {
        s0: p.s0,
        strike: p.strike,
        mu: p.mu,
        sigma: p.sigma,
        jump_gamma: p.jump_gamma,
        jump_rate: p.jump_rate,
        horizon: p.horizon,
    }
}

pub(crate) fn run(cfg: &ScenarioConfig, p: &JumpCallParams, k: f64) -> Result<ScenarioReport> {
    let spec = spec(p);
    let mut report = ScenarioReport::new(
        ScenarioId::Ex56JumpCall,
        PlotSpec {
            title: "Call option with Brownian hedging in a jump-diffusion market".into(),
            x_label: "t [years]".into(),
            y_label: "rate [€/year]".into(),
            series: vec![
                ("rates.csv".into(), "closed_form (Poisson series), driver_mc against t".into()),
                ("series_terms.csv".into(), "series value against the number of jump terms".into()),
            ],
        },
    );
    let mut failed = Vec::new();
    for j in 0..10 {
        let t = j as f64 / 10.0 * p.horizon;
        let series = jump_market_rate_series(&spec, t, p.max_jumps)?;
        let mc = jump_market_rate(&spec, t, cfg.n_paths, derive_seed(cfg.seed, j))?;
        if !mc.within(series, k) {
            failed.push(num(t));
        }
        if j == 0 {
            report.checks.push(near("series_vs_mc@t=0".into(), &mc, series, k));
        }
        report.rows.push(RateRow { t, closed_form: Some(series), driver: Some(mc), finite_difference: None });
    }
    report.checks.push(crate::report::Check::new(
        "series_vs_mc_all_rows",
        failed.is_empty(),
        if failed.is_empty() { format!("10 rows within {k} SE") } else { format!("outside {k} SE at t = {}", failed.join(" ")) },
    ));

    let mut terms = Table::new("series_terms", &["max_jumps", "rate_t0"]);
    for m in [2, 5, 10, 20, 40, p.max_jumps] {
        let v = jump_market_rate_series(&spec, 0.0, m).map_or("NA".to_string(), num);
        terms.push(vec![m.to_string(), v]);
    }
    report.tables.push(terms);
    Ok(report)
}
