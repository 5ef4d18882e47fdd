use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::field;
use crate::{Result, ScenarioError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScenarioId {
    #[serde(rename = "fig1_put")]
    Fig1Put,
    #[serde(rename = "fig2_vasicek")]
    Fig2Vasicek,
    #[serde(rename = "appC1_exp_payoff")]
    AppC1ExpPayoff,
    #[serde(rename = "appD_sweep")]
    AppDSweep,
    #[serde(rename = "ex53_ambiguous")]
    Ex53Ambiguous,
    #[serde(rename = "ex54_entropic_brownian")]
    Ex54EntropicBrownian,
    #[serde(rename = "ex55_martingale")]
    Ex55Martingale,
    #[serde(rename = "ex56_jump_call")]
    Ex56JumpCall,
    #[serde(rename = "ex37_entropic_jump")]
    Ex37EntropicJump,
}

impl ScenarioId {
    pub const ALL: [ScenarioId; 9] = [
        ScenarioId::Fig1Put,
        ScenarioId::Fig2Vasicek,
        ScenarioId::AppC1ExpPayoff,
        ScenarioId::AppDSweep,
        ScenarioId::Ex53Ambiguous,
        ScenarioId::Ex54EntropicBrownian,
        ScenarioId::Ex55Martingale,
        ScenarioId::Ex56JumpCall,
        ScenarioId::Ex37EntropicJump,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioId::Fig1Put => "fig1_put",
            ScenarioId::Fig2Vasicek => "fig2_vasicek",
            ScenarioId::AppC1ExpPayoff => "appC1_exp_payoff",
            ScenarioId::AppDSweep => "appD_sweep",
            ScenarioId::Ex53Ambiguous => "ex53_ambiguous",
            ScenarioId::Ex54EntropicBrownian => "ex54_entropic_brownian",
            ScenarioId::Ex55Martingale => "ex55_martingale",
            ScenarioId::Ex56JumpCall => "ex56_jump_call",
            ScenarioId::Ex37EntropicJump => "ex37_entropic_jump",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ScenarioId::Fig1Put => "Black-Scholes put: rate curve and first passage of the price above c",
            ScenarioId::Fig2Vasicek => "Vasicek zero-coupon bond: rate curve and first passage of r above a barrier",
            ScenarioId::AppC1ExpPayoff => "replicating portfolio of exp(sigma W_T)",
            ScenarioId::AppDSweep => "Vasicek bond rate curves across mean-reversion speeds",
            ScenarioId::Ex53Ambiguous => "separate lending and borrowing rates, long and short S_T",
            ScenarioId::Ex54EntropicBrownian => "entropic risk of c W_T across risk aversions",
            ScenarioId::Ex55Martingale => "conditional expectation with Brownian and Poisson noise",
            ScenarioId::Ex56JumpCall => "call option in a jump-diffusion market",
            ScenarioId::Ex37EntropicJump => "entropic risk of a capped Poisson claim, both rate representations",
        }
    }
}

impl fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioId {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<ScenarioId> {
        ScenarioId::ALL.iter().copied().find(|id| id.as_str() == s).ok_or_else(|| {
            let known: Vec<&str> = ScenarioId::ALL.iter().map(|id| id.as_str()).collect();
            ScenarioError::Config(format!("unknown scenario `{s}`; known scenarios: {}", known.join(", ")))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fig1Params {
    pub s0: f64,
    pub mu: f64,
    pub sigma: f64,
    pub strike: f64,
    pub horizon: f64,
    /// Level `c` of the put price that defines the stopping time.
    pub barrier: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fig2Params {
    pub r0: f64,
    pub a: f64,
    pub b: f64,
    pub sigma: f64,
    pub horizon: f64,
    /// Level of the short rate that defines the stopping time.
    pub barrier: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpPayoffParams {
    pub mu: f64,
    pub sigma: f64,
    pub horizon: f64,
    pub barrier: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepParams {
    pub r0: f64,
    pub b: f64,
    pub sigma: f64,
    pub horizon: f64,
    pub a_grid: Vec<f64>,
    /// Fractions of the horizon at which monotonicity in `a` is reported.
    pub check_fractions: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmbiguousParams {
    pub s0: f64,
    pub mu: f64,
    pub sigma: f64,
    pub lending: f64,
    pub borrowing: f64,
    pub horizon: f64,
    /// Level of the long position's risk that defines the stopping time.
    pub barrier: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntropicBrownianParams {
    pub c: f64,
    pub gamma_grid: Vec<f64>,
    pub horizon: f64,
    pub barrier: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MartingaleParams {
    pub x0: f64,
    pub sigma: f64,
    pub jump_size: f64,
    pub jump_rate: f64,
    pub horizon: f64,
    pub barrier: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JumpCallParams {
    pub s0: f64,
    pub strike: f64,
    pub mu: f64,
    pub sigma: f64,
    pub jump_gamma: f64,
    pub jump_rate: f64,
    pub horizon: f64,
    pub max_jumps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntropicJumpParams {
    pub beta: f64,
    pub cap: u64,
    pub jump_rate: f64,
    pub gamma: f64,
    pub horizon: f64,
    pub barrier: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioParams {
    Fig1Put(Fig1Params),
    Fig2Vasicek(Fig2Params),
    AppC1ExpPayoff(ExpPayoffParams),
    AppDSweep(SweepParams),
    Ex53Ambiguous(AmbiguousParams),
    Ex54EntropicBrownian(EntropicBrownianParams),
    Ex55Martingale(MartingaleParams),
    Ex56JumpCall(JumpCallParams),
    Ex37EntropicJump(EntropicJumpParams),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario_id: ScenarioId,
    pub n_paths: usize,
    pub n_steps: usize,
    pub seed: u64,
    pub output_dir: String,
    pub params: ScenarioParams,
}

impl ScenarioConfig {
    pub fn defaults(id: ScenarioId) -> ScenarioConfig {
        let params = match id {
            ScenarioId::Fig1Put => ScenarioParams::Fig1Put(Fig1Params {
                s0: 1000.0,
                mu: 0.10,
                sigma: 0.10,
                strike: 1000.0,
                horizon: 1.0,
                barrier: 80.0,
            }),
            ScenarioId::Fig2Vasicek => ScenarioParams::Fig2Vasicek(Fig2Params {
                r0: 0.02,
                a: 1.0,
                b: 0.02,
                sigma: 0.01,
                horizon: 1.0,
                barrier: 0.05,
            }),
            ScenarioId::AppC1ExpPayoff => {
                ScenarioParams::AppC1ExpPayoff(ExpPayoffParams { mu: 0.10, sigma: 0.10, horizon: 1.0, barrier: 1.0 })
            }
            ScenarioId::AppDSweep => ScenarioParams::AppDSweep(SweepParams {
                r0: 0.02,
                b: 0.04,
                sigma: 0.01,
                horizon: 1.0,
                a_grid: vec![0.1, 0.5, 1.0, 2.0, 5.0],
                check_fractions: vec![0.0, 0.25, 0.5, 0.75],
            }),
            ScenarioId::Ex53Ambiguous => ScenarioParams::Ex53Ambiguous(AmbiguousParams {
                s0: 1.0,
                mu: 0.05,
                sigma: 0.2,
                lending: 0.01,
                borrowing: 0.03,
                horizon: 1.0,
                barrier: 1.2,
            }),
            ScenarioId::Ex54EntropicBrownian => ScenarioParams::Ex54EntropicBrownian(EntropicBrownianParams {
                c: 1.0,
                gamma_grid: vec![0.5, 1.0, 2.0],
                horizon: 1.0,
                barrier: 1.0,
            }),
            ScenarioId::Ex55Martingale => ScenarioParams::Ex55Martingale(MartingaleParams {
                x0: 0.0,
                sigma: 1.0,
                jump_size: 0.5,
                jump_rate: 2.0,
                horizon: 1.0,
                barrier: 1.0,
            }),
            ScenarioId::Ex56JumpCall => ScenarioParams::Ex56JumpCall(JumpCallParams {
                s0: 1.0,
                strike: 1.0,
                mu: 0.10,
                sigma: 0.20,
                jump_gamma: -0.10,
                jump_rate: 2.0,
                horizon: 1.0,
                max_jumps: 60,
            }),
            ScenarioId::Ex37EntropicJump => ScenarioParams::Ex37EntropicJump(EntropicJumpParams {
                beta: 0.5,
                cap: 5,
                jump_rate: 2.0,
                gamma: 1.0,
                horizon: 1.0,
                barrier: 2.0,
            }),
        };
        ScenarioConfig {
            scenario_id: id,
            n_paths: 100_000,
            n_steps: 252,
            seed: 2024,
            output_dir: "out".to_string(),
            params,
        }
    }

    pub fn horizon(&self) -> f64 {
        match &self.params {
            ScenarioParams::Fig1Put(p) => p.horizon,
            ScenarioParams::Fig2Vasicek(p) => p.horizon,
            ScenarioParams::AppC1ExpPayoff(p) => p.horizon,
            ScenarioParams::AppDSweep(p) => p.horizon,
            ScenarioParams::Ex53Ambiguous(p) => p.horizon,
            ScenarioParams::Ex54EntropicBrownian(p) => p.horizon,
            ScenarioParams::Ex55Martingale(p) => p.horizon,
            ScenarioParams::Ex56JumpCall(p) => p.horizon,
            ScenarioParams::Ex37EntropicJump(p) => p.horizon,
        }
    }

    pub fn dt(&self) -> f64 {
        self.horizon() / self.n_steps as f64
    }

    /// True when the model parameters are the built-in defaults (sample sizes may differ).
    pub fn has_default_params(&self) -> bool {
        self.params == ScenarioConfig::defaults(self.scenario_id).params
    }

    pub fn to_value(&self) -> Value {
        let params = match &self.params {
            ScenarioParams::Fig1Put(p) => serde_json::to_value(p),
            ScenarioParams::Fig2Vasicek(p) => serde_json::to_value(p),
            ScenarioParams::AppC1ExpPayoff(p) => serde_json::to_value(p),
            ScenarioParams::AppDSweep(p) => serde_json::to_value(p),
            ScenarioParams::Ex53Ambiguous(p) => serde_json::to_value(p),
            ScenarioParams::Ex54EntropicBrownian(p) => serde_json::to_value(p),
            ScenarioParams::Ex55Martingale(p) => serde_json::to_value(p),
            ScenarioParams::Ex56JumpCall(p) => serde_json::to_value(p),
            ScenarioParams::Ex37EntropicJump(p) => serde_json::to_value(p),
        }
        .expect("parameter structs serialise");
        let mut map = Map::new();
        map.insert("scenario_id".into(), Value::from(self.scenario_id.as_str()));
        map.insert("n_paths".into(), Value::from(self.n_paths));
        map.insert("n_steps".into(), Value::from(self.n_steps));
        map.insert("seed".into(), Value::from(self.seed));
        map.insert("output_dir".into(), Value::from(self.output_dir.clone()));
        if let Value::Object(p) = params {
            map.extend(p);
        }
        Value::Object(map)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("config serialises")
    }

    pub fn from_value(value: Value) -> Result<ScenarioConfig> {
        let Value::Object(user) = value else {
            return Err(ScenarioError::Config("config must be a JSON object".into()));
        };
        let id: ScenarioId = match user.get("scenario_id") {
            None => return Err(field("scenario_id", "missing required field `scenario_id`")),
            Some(Value::String(s)) => s.parse()?,
            Some(other) => return Err(field("scenario_id", format!("expected a string, got {other}"))),
        };
        let Value::Object(mut merged) = ScenarioConfig::defaults(id).to_value() else {
            unreachable!("defaults serialise to an object")
        };
        for (k, v) in user {
            if !merged.contains_key(&k) {
                return Err(field(&k, format!("unknown field for scenario `{id}`")));
            }
            merged.insert(k, v);
        }
        let take = |m: &mut Map<String, Value>, k: &str| m.remove(k).expect("merged config has common fields");
        let n_paths = typed::<usize>(take(&mut merged, "n_paths"), "n_paths")?;
        let n_steps = typed::<usize>(take(&mut merged, "n_steps"), "n_steps")?;
        let seed = typed::<u64>(take(&mut merged, "seed"), "seed")?;
        let output_dir = typed::<String>(take(&mut merged, "output_dir"), "output_dir")?;
        merged.remove("scenario_id");
        let rest = Value::Object(merged);
        let params = match id {
            ScenarioId::Fig1Put => ScenarioParams::Fig1Put(params(rest)?),
            ScenarioId::Fig2Vasicek => ScenarioParams::Fig2Vasicek(params(rest)?),
            ScenarioId::AppC1ExpPayoff => ScenarioParams::AppC1ExpPayoff(params(rest)?),
            ScenarioId::AppDSweep => ScenarioParams::AppDSweep(params(rest)?),
            ScenarioId::Ex53Ambiguous => ScenarioParams::Ex53Ambiguous(params(rest)?),
            ScenarioId::Ex54EntropicBrownian => ScenarioParams::Ex54EntropicBrownian(params(rest)?),
            ScenarioId::Ex55Martingale => ScenarioParams::Ex55Martingale(params(rest)?),
            ScenarioId::Ex56JumpCall => ScenarioParams::Ex56JumpCall(params(rest)?),
            ScenarioId::Ex37EntropicJump => ScenarioParams::Ex37EntropicJump(params(rest)?),
        };
        let cfg = ScenarioConfig { scenario_id: id, n_paths, n_steps, seed, output_dir, params };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn parse(text: &str) -> Result<ScenarioConfig> {
        if text.trim().is_empty() {
            return Err(field("scenario_id", "missing required field `scenario_id` (config is empty)"));
        }
        let value: Value = serde_json::from_str(text).map_err(|e| ScenarioError::Config(format!("malformed JSON: {e}")))?;
        ScenarioConfig::from_value(value)
    }

    /// Apply command-line overrides, then re-validate.
    pub fn with_overrides(
        mut self,
        seed: Option<u64>,
        n_paths: Option<usize>,
        n_steps: Option<usize>,
        output_dir: Option<&str>,
    ) -> Result<ScenarioConfig> {
        if let Some(s) = seed {
            self.seed = s;
        }
        if let Some(n) = n_paths {
            self.n_paths = n;
        }
        if let Some(n) = n_steps {
            self.n_steps = n;
        }
        if let Some(o) = output_dir {
            self.output_dir = o.to_string();
        }
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        check(self.n_paths >= 2, "n_paths", "must be >= 2")?;
        check(self.n_steps >= 8, "n_steps", "must be >= 8 (finite differences use up to 8 steps)")?;
        check(!self.output_dir.is_empty(), "output_dir", "must not be empty")?;
        let pos = |v: f64, name: &str| check(v.is_finite() && v > 0.0, name, "must be finite and > 0");
        let fin = |v: f64, name: &str| check(v.is_finite(), name, "must be finite");
        match &self.params {
            ScenarioParams::Fig1Put(p) => {
                pos(p.s0, "s0")?;
                fin(p.mu, "mu")?;
                pos(p.sigma, "sigma")?;
                pos(p.strike, "strike")?;
                pos(p.horizon, "horizon")?;
                fin(p.barrier, "barrier")
            }
            ScenarioParams::Fig2Vasicek(p) => {
                check(p.r0.is_finite() && p.r0 > -1.0, "r0", "must be finite and > -1")?;
                pos(p.a, "a")?;
                check(p.b.is_finite() && p.b >= 0.0, "b", "must be finite and >= 0")?;
                check(p.sigma.is_finite() && p.sigma >= 0.0, "sigma", "must be finite and >= 0")?;
                pos(p.horizon, "horizon")?;
                fin(p.barrier, "barrier")
            }
            ScenarioParams::AppC1ExpPayoff(p) => {
                fin(p.mu, "mu")?;
                pos(p.sigma, "sigma")?;
                pos(p.horizon, "horizon")?;
                fin(p.barrier, "barrier")
            }
            ScenarioParams::AppDSweep(p) => {
                check(p.r0.is_finite() && p.r0 > -1.0, "r0", "must be finite and > -1")?;
                check(p.b.is_finite() && p.b >= 0.0, "b", "must be finite and >= 0")?;
                check(p.sigma.is_finite() && p.sigma >= 0.0, "sigma", "must be finite and >= 0")?;
                pos(p.horizon, "horizon")?;
                check(!p.a_grid.is_empty(), "a_grid", "must not be empty")?;
                check(p.a_grid.iter().all(|a| a.is_finite() && *a > 0.0), "a_grid", "entries must be > 0")?;
                check(p.a_grid.windows(2).all(|w| w[0] < w[1]), "a_grid", "must be strictly increasing")?;
                check(
                    p.check_fractions.iter().all(|f| (0.0..1.0).contains(f)),
                    "check_fractions",
                    "entries must lie in [0, 1)",
                )
            }
            ScenarioParams::Ex53Ambiguous(p) => {
                pos(p.s0, "s0")?;
                fin(p.mu, "mu")?;
                pos(p.sigma, "sigma")?;
                check(p.lending.is_finite() && p.lending >= 0.0, "lending", "must be finite and >= 0")?;
                check(p.borrowing.is_finite() && p.borrowing >= p.lending, "borrowing", "must be finite and >= lending")?;
                pos(p.horizon, "horizon")?;
                fin(p.barrier, "barrier")
            }
            ScenarioParams::Ex54EntropicBrownian(p) => {
                fin(p.c, "c")?;
                check(!p.gamma_grid.is_empty(), "gamma_grid", "must not be empty")?;
                check(p.gamma_grid.iter().all(|g| g.is_finite() && *g > 0.0), "gamma_grid", "entries must be > 0")?;
                pos(p.horizon, "horizon")?;
                fin(p.barrier, "barrier")
            }
            ScenarioParams::Ex55Martingale(p) => {
                fin(p.x0, "x0")?;
                check(p.sigma.is_finite() && p.sigma >= 0.0, "sigma", "must be finite and >= 0")?;
                fin(p.jump_size, "jump_size")?;
                check(p.jump_rate.is_finite() && p.jump_rate >= 0.0, "jump_rate", "must be finite and >= 0")?;
                pos(p.horizon, "horizon")?;
                fin(p.barrier, "barrier")
            }
            ScenarioParams::Ex56JumpCall(p) => {
                pos(p.s0, "s0")?;
                pos(p.strike, "strike")?;
                fin(p.mu, "mu")?;
                pos(p.sigma, "sigma")?;
                check(p.jump_gamma.is_finite() && p.jump_gamma > -1.0, "jump_gamma", "must be finite and > -1")?;
                check(p.jump_rate.is_finite() && p.jump_rate >= 0.0, "jump_rate", "must be finite and >= 0")?;
                pos(p.horizon, "horizon")?;
                check(p.max_jumps >= 1, "max_jumps", "must be >= 1")
            }
            ScenarioParams::Ex37EntropicJump(p) => {
                fin(p.beta, "beta")?;
                check(p.jump_rate.is_finite() && p.jump_rate >= 0.0, "jump_rate", "must be finite and >= 0")?;
                pos(p.gamma, "gamma")?;
                pos(p.horizon, "horizon")?;
                fin(p.barrier, "barrier")
            }
        }
    }
}

fn check(ok: bool, name: &str, detail: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(field(name, detail))
    }
}

fn typed<T: serde::de::DeserializeOwned>(v: Value, name: &str) -> Result<T> {
    serde_json::from_value(v).map_err(|e| field(name, e.to_string()))
}

fn params<T: serde::de::DeserializeOwned>(v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| ScenarioError::Config(format!("schema violation: {e}")))
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ScenarioError::Io { path: path.display().to_string(), source: e })?;
    ScenarioConfig::parse(&text)
}
