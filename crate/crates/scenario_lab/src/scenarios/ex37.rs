use std::collections::HashMap;

use bsde_engine::{entropic_rate_jump, EntropicJumpDriver, EntropicJumpModel, SolutionSample};
use stochastic_core::{first_hitting, make_time_grid, sample_noise, Direction, PathMatrix};

use crate::common::{agree, rate_rows, row_checks, stopping_rows};
use crate::config::EntropicJumpParams;
use crate::report::{num, Check, PlotSpec, ScenarioReport, Table};
use crate::{Result, ScenarioConfig, ScenarioId};

/// Capped linear claim `β·min(n, cap)` on the jump count.
pub fn capped_payoff(p: &EntropicJumpParams) -> impl Fn(u64) -> f64 + '_ {
    move |n| p.beta * n.min(p.cap) as f64
}

/// Entropic risk and jump exposure read off the model at the simulated counts.
pub fn entropic_jump_solution(cfg: &ScenarioConfig, p: &EntropicJumpParams) -> Result<SolutionSample> {
    let payoff = capped_payoff(p);
    let model = EntropicJumpModel::new(p.gamma, p.jump_rate, p.horizon, &payoff)?;
    let grid = make_time_grid(p.horizon, cfg.n_steps)?;
    let noise = sample_noise(grid, cfg.n_paths, 1, p.jump_rate, cfg.seed)?;
    let counts = PathMatrix::from_rows(cfg.n_paths, grid.n_points(), |i, row| {
        let mut n = 0u32;
        row[0] = 0.0;
        for k in 0..grid.n_steps() {
            n += noise.count(i, k);
            row[k + 1] = n as f64;
        }
    });
    let mut cache: HashMap<(usize, u64), (f64, f64)> = HashMap::new();
    for k in 0..grid.n_points() {
        let t = grid.time(k);
        for n in counts.column(k) {
            let n = n as u64;
            if let std::collections::hash_map::Entry::Vacant(e) = cache.entry((k, n)) {
                e.insert((model.value(t, n)?, model.jump_u(t, n)?));
            }
        }
    }
    let rho = counts.map(|k, n| cache[&(k, n as u64)].0);
    let u = counts.map(|k, n| cache[&(k, n as u64)].1);
    let z = counts.map(|_, _| 0.0);
    Ok(SolutionSample::new(grid, rho, vec![z], Some(u), Some(counts))?)
}

pub(crate) fn run(cfg: &ScenarioConfig, p: &EntropicJumpParams, k: f64) -> Result<ScenarioReport> {
    let payoff = capped_payoff(p);
    let sol = entropic_jump_solution(cfg, p)?;
    let driver = EntropicJumpDriver { gamma: p.gamma, intensity: p.jump_rate };
    let mut report = ScenarioReport::new(
        ScenarioId::Ex37EntropicJump,
        PlotSpec {
            title: "Entropic risk of a capped Poisson claim".into(),
            x_label: "t [years]".into(),
            y_label: "rate [€/year]".into(),
            series: vec![
                ("rates.csv".into(), "closed_form (compensator representation), driver_mc, fd_mc against t".into()),
                ("representations.csv".into(), "both exact representations against t".into()),
            ],
        },
    );
    let mut exact = Vec::new();
    for kk in 0..sol.grid.n_steps() {
        let t = sol.grid.time(kk);
        exact.push((t, entropic_rate_jump(p.gamma, p.jump_rate, &payoff, p.horizon, t)?));
    }
    let lookup = |t: f64| exact.iter().find(|(s, _)| *s == t).map(|(_, r)| r.representation_1.value);
    report.rows = rate_rows(&sol, &driver, &lookup, true)?;
    row_checks(&mut report, k, "");

    let mut table = Table::new("representations", &["t", "representation_1", "representation_2", "rel_diff"]);
    let mut worst: f64 = 0.0;
    for (t, r) in &exact {
        let (a, b) = (r.representation_1.value, r.representation_2.value);
        worst = worst.max((a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE));
        table.push(vec![num(*t), num(a), num(b), num((a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE))]);
    }
    report.tables.push(table);
    report.checks.push(Check::new(
        "representations_agree",
        worst <= 1e-6,
        format!("largest relative difference {}", num(worst)),
    ));

    let tau = first_hitting(&sol.rho, sol.grid, p.barrier, Direction::Above)?;
    if let Some((d, f)) = stopping_rows(&mut report, &sol, &driver, &tau, "")? {
        report.checks.push(agree("driver_vs_fd@tau".into(), &d, &f, k));
    }
    Ok(report)
}
