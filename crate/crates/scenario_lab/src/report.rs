use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use bsde_engine::RateEstimate;
use serde_json::{json, Value};

use crate::{Result, ScenarioConfig, ScenarioError, ScenarioId};

/// One instant of the rate table. Missing methods are written as `NA`.
#[derive(Debug, Clone)]
pub struct RateRow {
    pub t: f64,
    pub closed_form: Option<f64>,
    pub driver: Option<RateEstimate>,
    pub finite_difference: Option<RateEstimate>,
}

#[derive(Debug, Clone)]
pub struct StoppingRow {
    /// Label, for instance `driver_expectation` or `finite_difference:long`.
    pub method: String,
    pub estimate: RateEstimate,
}

/// Extra CSV emitted next to the rate table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Table {
        Table { name: name.to_string(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

#[derive(Debug, Clone)]
pub struct ScenarioReport {
    pub scenario: ScenarioId,
    pub rows: Vec<RateRow>,
    pub stopping: Vec<StoppingRow>,
    pub tables: Vec<Table>,
    pub checks: Vec<Check>,
    /// Axis labels and series names for the plot-spec file.
    pub plot: PlotSpec,
}

#[derive(Debug, Clone, Default)]
pub struct PlotSpec {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<(String, String)>,
}

impl ScenarioReport {
    pub fn new(scenario: ScenarioId, plot: PlotSpec) -> ScenarioReport {
        ScenarioReport { scenario, rows: Vec::new(), stopping: Vec::new(), tables: Vec::new(), checks: Vec::new(), plot }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn stopping_row(&self, method: &str) -> Option<&RateEstimate> {
        self.stopping.iter().find(|r| r.method == method).map(|r| &r.estimate)
    }

    /// Row whose time is closest to `t`.
    pub fn row_near(&self, t: f64) -> Option<&RateRow> {
        self.rows.iter().min_by(|a, b| (a.t - t).abs().total_cmp(&(b.t - t).abs()))
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn rates_csv(&self) -> String {
        let mut out = String::from("t,closed_form,driver_mc,driver_se,fd_mc,fd_se\n");
        for r in &self.rows {
            let pair = |e: &Option<RateEstimate>| match e {
                Some(e) => (num(e.value), num(e.std_error)),
                None => ("NA".to_string(), "NA".to_string()),
            };
            let (dv, ds) = pair(&r.driver);
            let (fv, fs) = pair(&r.finite_difference);
            let cf = r.closed_form.map_or("NA".to_string(), num);
            let _ = writeln!(out, "{},{cf},{dv},{ds},{fv},{fs}", num(r.t));
        }
        out
    }

    pub fn stopping_csv(&self) -> String {
        let mut out = String::from("method,value,se,hit_prob\n");
        for r in &self.stopping {
            let hp = r.estimate.hit_probability.map_or("NA".to_string(), num);
            let _ = writeln!(out, "{},{},{},{hp}", r.method, num(r.estimate.value), num(r.estimate.std_error));
        }
        out
    }

    pub fn plot_spec(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "title: {}", self.plot.title);
        let _ = writeln!(out, "x: {}", self.plot.x_label);
        let _ = writeln!(out, "y: {}", self.plot.y_label);
        for (file, series) in &self.plot.series {
            let _ = writeln!(out, "series: {file} :: {series}");
        }
        out
    }

    pub fn meta(&self, config: &ScenarioConfig, tolerance_scale: f64) -> Value {
        json!({
            "scenario_id": self.scenario.as_str(),
            "config": config.to_value(),
            "seed": config.seed,
            "dt": config.dt(),
            "tolerance_scale": tolerance_scale,
            "checks": self.checks.iter().map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail})).collect::<Vec<_>>(),
        })
    }

    /// Writes `<dir>/<scenario>/{rates.csv, stopping.csv, meta.json, plot.txt, <tables>.csv}`.
    pub fn write(&self, config: &ScenarioConfig, tolerance_scale: f64, out_dir: &Path) -> Result<PathBuf> {
        let dir = out_dir.join(self.scenario.as_str());
        fs::create_dir_all(&dir).map_err(|e| io(&dir, e))?;
        let mut files = vec![
            ("rates.csv".to_string(), self.rates_csv()),
            ("stopping.csv".to_string(), self.stopping_csv()),
            (
                "meta.json".to_string(),
                serde_json::to_string_pretty(&self.meta(config, tolerance_scale)).expect("meta serialises") + "\n",
            ),
            ("plot.txt".to_string(), self.plot_spec()),
        ];
        files.extend(self.tables.iter().map(|t| (format!("{}.csv", t.name), t.to_csv())));
        for (name, body) in files {
            let path = dir.join(name);
            fs::write(&path, body).map_err(|e| io(&path, e))?;
        }
        Ok(dir)
    }
}

fn io(path: &Path, source: std::io::Error) -> ScenarioError {
    ScenarioError::Io { path: path.display().to_string(), source }
}

/// Shortest round-trip representation; `NA` for non-finite values.
pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else {
        "NA".to_string()
    }
}
