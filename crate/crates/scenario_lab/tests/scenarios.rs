use std::fs;

use scenario_lab::{run_scenario, ScenarioConfig, ScenarioId, ScenarioParams, ScenarioReport};

fn small(id: ScenarioId, paths: usize, steps: usize) -> ScenarioConfig {
    ScenarioConfig { n_paths: paths, n_steps: steps, seed: 3, ..ScenarioConfig::defaults(id) }
}

fn failures(r: &ScenarioReport) -> Vec<String> {
    r.checks.iter().filter(|c| !c.passed).map(|c| format!("{}: {}", c.name, c.detail)).collect()
}

#[test]
fn fig1_zero_drift_gives_zero_rates() {
    let mut cfg = small(ScenarioId::Fig1Put, 4_000, 20);
    if let ScenarioParams::Fig1Put(p) = &mut cfg.params {
        p.mu = 0.0;
    }
    let r = run_scenario(&cfg, 1.0).unwrap();
    for row in &r.rows {
        assert!(row.closed_form.unwrap().abs() < 1e-9);
        assert_eq!(row.driver.as_ref().unwrap().value, 0.0);
        assert!(row.finite_difference.as_ref().unwrap().within(0.0, 4.0));
    }
}

#[test]
fn fig1_barrier_below_value_hits_immediately() {
    let mut cfg = small(ScenarioId::Fig1Put, 3_000, 20);
    if let ScenarioParams::Fig1Put(p) = &mut cfg.params {
        p.barrier = 1.0;
    }
    let r = run_scenario(&cfg, 1.0).unwrap();
    let stop = r.stopping_row("driver_expectation").unwrap();
    assert_eq!(stop.hit_probability, Some(1.0));
    let t0 = r.rows[0].driver.as_ref().unwrap();
    assert!((stop.value - t0.value).abs() <= 1e-12 * t0.value.abs());
}

#[test]
fn fig2_deterministic_rate() {
    let mut cfg = small(ScenarioId::Fig2Vasicek, 50, 20);
    if let ScenarioParams::Fig2Vasicek(p) = &mut cfg.params {
        p.sigma = 0.0;
        p.r0 = p.b;
    }
    let r = run_scenario(&cfg, 1.0).unwrap();
    for row in &r.rows {
        let exact = 0.02 * (-0.02 * (1.0 - row.t)).exp();
        assert!((row.closed_form.unwrap() - exact).abs() < 1e-15);
        assert!((row.driver.as_ref().unwrap().value - exact).abs() < 1e-14);
    }
    assert!(r.check("stopping_hits").is_some_and(|c| !c.passed));
}

#[test]
fn reports_are_byte_reproducible() {
    let cfg = small(ScenarioId::AppC1ExpPayoff, 2_000, 16);
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let da = run_scenario(&cfg, 1.0).unwrap().write(&cfg, 1.0, a.path()).unwrap();
    let db = run_scenario(&cfg, 1.0).unwrap().write(&cfg, 1.0, b.path()).unwrap();
    let mut names: Vec<_> = fs::read_dir(&da).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.len() >= 5);
    for n in names {
        assert_eq!(fs::read(da.join(&n)).unwrap(), fs::read(db.join(&n)).unwrap(), "{n:?}");
    }
}

#[test]
fn sweep_with_one_speed_has_no_comparison() {
    let mut cfg = small(ScenarioId::AppDSweep, 500, 16);
    if let ScenarioParams::AppDSweep(p) = &mut cfg.params {
        p.a_grid = vec![2.0];
    }
    let r = run_scenario(&cfg, 1.0).unwrap();
    let c = r.check("abs_rate_nondecreasing_in_a@t=0").unwrap();
    assert!(c.passed && c.detail.contains("single curve"));
}

#[test]
fn martingale_rates_vanish() {
    let r = run_scenario(&small(ScenarioId::Ex55Martingale, 5_000, 20), 1.0).unwrap();
    assert!(failures(&r).is_empty(), "{:?}", failures(&r));
}

#[test]
fn entropic_brownian_scenario_passes() {
    let r = run_scenario(&small(ScenarioId::Ex54EntropicBrownian, 5_000, 20), 1.0).unwrap();
    assert!(failures(&r).is_empty(), "{:?}", failures(&r));
    assert_eq!(r.table("gamma_sweep").unwrap().rows.len(), 3);
}

#[test]
fn ambiguous_scenario_passes() {
    let r = run_scenario(&small(ScenarioId::Ex53Ambiguous, 5_000, 20), 1.0).unwrap();
    assert!(failures(&r).is_empty(), "{:?}", failures(&r));
}

#[test]
fn entropic_jump_scenario_passes() {
    let r = run_scenario(&small(ScenarioId::Ex37EntropicJump, 5_000, 20), 1.0).unwrap();
    assert!(r.check("representations_agree").unwrap().passed);
    assert!(failures(&r).is_empty(), "{:?}", failures(&r));
}

#[test]
fn jump_call_series_matches_mc() {
    let r = run_scenario(&small(ScenarioId::Ex56JumpCall, 20_000, 10), 1.0).unwrap();
    assert!(failures(&r).is_empty(), "{:?}", failures(&r));
    assert!(r.rows.iter().all(|row| row.finite_difference.is_none()));
    assert!(r.rates_csv().lines().nth(1).unwrap().ends_with(",NA,NA"));
}

#[test]
fn invalid_tolerance_and_config_rejected() {
    let cfg = small(ScenarioId::Fig1Put, 100, 10);
    assert!(run_scenario(&cfg, 0.0).unwrap_err().is_config());
    let bad = ScenarioConfig { n_steps: 4, ..cfg };
    assert!(run_scenario(&bad, 1.0).unwrap_err().is_config());
}

