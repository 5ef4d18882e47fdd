use std::sync::Arc;

use bitflags::bitflags;
use rand::Rng;
use risk_closed_forms::DeterministicFn;
use stochastic_core::rng::path_rng;

use crate::{EngineError, Result};

bitflags! {
    #[derive(Debug, Clone, Copy, PartialEq, Eq)]
    pub struct DriverFlags: u32 {
        const Y_INDEPENDENT = 1;
        const POSITIVELY_HOMOGENEOUS = 1 << 1;
        const CONVEX_IN_Y = 1 << 2;
        const NONDECREASING_IN_Y = 1 << 3;
        const LIPSCHITZ = 1 << 4;
        const QUADRATIC = 1 << 5;
        const JUMP_AWARE = 1 << 6;
    }
}

/// Generator `g(t, y, z, u)`; `state` carries the model's Markov state
/// (e.g. the short rate) for drivers that depend on ω through it.
pub trait Driver: Send + Sync {
    fn name(&self) -> &str;
    fn flags(&self) -> DriverFlags;
    fn evaluate(&self, t: f64, y: f64, z: &[f64], u: f64, state: f64) -> f64;
}

fn norm_sq(z: &[f64]) -> f64 {
    z.iter().map(|v| v * v).sum()
}

const LINEAR_FLAGS: DriverFlags = DriverFlags::Y_INDEPENDENT
    .union(DriverFlags::POSITIVELY_HOMOGENEOUS)
    .union(DriverFlags::CONVEX_IN_Y)
    .union(DriverFlags::NONDECREASING_IN_Y)
    .union(DriverFlags::LIPSCHITZ);

#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroDriver;

impl Driver for ZeroDriver {
    fn name(&self) -> &str {
        "zero"
    }
    fn flags(&self) -> DriverFlags {
        LINEAR_FLAGS
    }
    fn evaluate(&self, _: f64, _: f64, _: &[f64], _: f64, _: f64) -> f64 {
        0.0
    }
}

/// `g = −θ·z₁` with market price of risk `θ = μ/σ`.
#[derive(Debug, Clone, Copy)]
pub struct LinearMarketDriver {
    pub theta: f64,
    pub jump_market: bool,
}

impl LinearMarketDriver {
    pub fn new(mu: f64, sigma: f64) -> Self {
        LinearMarketDriver { theta: mu / sigma, jump_market: false }
    }

    pub fn jump_market(mu: f64, sigma: f64) -> Self {
        LinearMarketDriver { theta: mu / sigma, jump_market: true }
    }
}

impl Driver for LinearMarketDriver {
    fn name(&self) -> &str {
        if self.jump_market {
            "jump_market_linear"
        } else {
            "linear_market"
        }
    }
    fn flags(&self) -> DriverFlags {
        if self.jump_market {
            LINEAR_FLAGS | DriverFlags::JUMP_AWARE
        } else {
            LINEAR_FLAGS
        }
    }
    fn evaluate(&self, _: f64, _: f64, z: &[f64], _: f64, _: f64) -> f64 {
        -self.theta * z[0]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateSource {
    /// Read the short rate from the path state.
    State,
    Constant(f64),
}

/// Discounting driver `g = −r·y`.
#[derive(Debug, Clone, Copy)]
pub struct BondDriver {
    pub rate: RateSource,
}

impl Driver for BondDriver {
    fn name(&self) -> &str {
        "bond"
    }
    fn flags(&self) -> DriverFlags {
        let mut f = DriverFlags::POSITIVELY_HOMOGENEOUS | DriverFlags::CONVEX_IN_Y | DriverFlags::LIPSCHITZ;
        if let RateSource::Constant(r) = self.rate {
            if r <= 0.0 {
                f |= DriverFlags::NONDECREASING_IN_Y;
            }
            if r == 0.0 {
                f |= DriverFlags::Y_INDEPENDENT;
            }
        }
        f
    }
    fn evaluate(&self, _: f64, y: f64, _: &[f64], _: f64, state: f64) -> f64 {
        let r = match self.rate {
            RateSource::State => state,
            RateSource::Constant(r) => r,
        };
        -r * y
    }
}

/// `g = −(r_t·y⁺ − R_t·y⁻)` with lending rate `r` and borrowing rate `R`.
#[derive(Debug, Clone)]
pub struct AmbiguousRateDriver {
    pub lending: DeterministicFn,
    pub borrowing: DeterministicFn,
    convex: bool,
}

impl AmbiguousRateDriver {
    pub fn new(lending: DeterministicFn, borrowing: DeterministicFn, horizon: f64) -> Self {
        let convex = probe_times(&lending, &borrowing, horizon)
            .into_iter()
            .all(|t| borrowing.value(t) >= lending.value(t));
        AmbiguousRateDriver { lending, borrowing, convex }
    }
}

fn probe_times(a: &DeterministicFn, b: &DeterministicFn, horizon: f64) -> Vec<f64> {
    let mut ts = vec![0.0, horizon];
    for f in [a, b] {
        if let DeterministicFn::PiecewiseConstant { breaks, .. } = f {
            ts.extend(breaks.iter().copied().filter(|t| *t <= horizon));
        }
    }
    ts
}

impl Driver for AmbiguousRateDriver {
    fn name(&self) -> &str {
        "ambiguous_rate"
    }
    fn flags(&self) -> DriverFlags {
        let f = DriverFlags::POSITIVELY_HOMOGENEOUS | DriverFlags::LIPSCHITZ;
        if self.convex {
            f | DriverFlags::CONVEX_IN_Y
        } else {
            f
        }
    }
    fn evaluate(&self, t: f64, y: f64, _: &[f64], _: f64, _: f64) -> f64 {
        -(self.lending.value(t) * y.max(0.0) - self.borrowing.value(t) * (-y).max(0.0))
    }
}

/// `g = (γ/2)·‖z‖²`.
#[derive(Debug, Clone, Copy)]
pub struct EntropicBrownianDriver {
    pub gamma: f64,
}

const ENTROPIC_FLAGS: DriverFlags = DriverFlags::Y_INDEPENDENT
    .union(DriverFlags::CONVEX_IN_Y)
    .union(DriverFlags::NONDECREASING_IN_Y)
    .union(DriverFlags::QUADRATIC);

impl Driver for EntropicBrownianDriver {
    fn name(&self) -> &str {
        "entropic_brownian"
    }
    fn flags(&self) -> DriverFlags {
        ENTROPIC_FLAGS
    }
    fn evaluate(&self, _: f64, _: f64, z: &[f64], _: f64, _: f64) -> f64 {
        0.5 * self.gamma * norm_sq(z)
    }
}

/// `g = (γ/2)·‖z‖² + (λ/γ)·(e^{γu} − γu − 1)` for a single jump mark of intensity `λ`.
#[derive(Debug, Clone, Copy)]
pub struct EntropicJumpDriver {
    pub gamma: f64,
    pub intensity: f64,
}

impl Driver for EntropicJumpDriver {
    fn name(&self) -> &str {
        "entropic_jump"
    }
    fn flags(&self) -> DriverFlags {
        ENTROPIC_FLAGS | DriverFlags::JUMP_AWARE
    }
    fn evaluate(&self, _: f64, _: f64, z: &[f64], u: f64, _: f64) -> f64 {
        let gu = self.gamma * u;
        0.5 * self.gamma * norm_sq(z) + self.intensity / self.gamma * (gu.exp_m1() - gu)
    }
}

/// `g = κ·y`.
#[derive(Debug, Clone, Copy)]
pub struct LinearYDriver {
    pub kappa: f64,
}

impl Driver for LinearYDriver {
    fn name(&self) -> &str {
        "linear_y"
    }
    fn flags(&self) -> DriverFlags {
        let mut f = DriverFlags::POSITIVELY_HOMOGENEOUS | DriverFlags::CONVEX_IN_Y | DriverFlags::LIPSCHITZ;
        if self.kappa >= 0.0 {
            f |= DriverFlags::NONDECREASING_IN_Y;
        }
        f
    }
    fn evaluate(&self, _: f64, y: f64, _: &[f64], _: f64, _: f64) -> f64 {
        self.kappa * y
    }
}

/// `g = y⁺`.
#[derive(Debug, Clone, Copy, Default)]
pub struct PositivePartDriver;

impl Driver for PositivePartDriver {
    fn name(&self) -> &str {
        "positive_part_y"
    }
    fn flags(&self) -> DriverFlags {
        DriverFlags::POSITIVELY_HOMOGENEOUS
            | DriverFlags::CONVEX_IN_Y
            | DriverFlags::NONDECREASING_IN_Y
            | DriverFlags::LIPSCHITZ
    }
    fn evaluate(&self, _: f64, y: f64, _: &[f64], _: f64, _: f64) -> f64 {
        y.max(0.0)
    }
}

/// Model parameters for the built-in catalog.
#[derive(Debug, Clone)]
pub struct DriverParams {
    pub mu: f64,
    pub sigma: f64,
    pub gamma: f64,
    pub jump_rate: f64,
    pub lending: DeterministicFn,
    pub borrowing: DeterministicFn,
    pub kappa: f64,
    pub horizon: f64,
}

impl Default for DriverParams {
    fn default() -> Self {
        DriverParams {
            mu: 0.1,
            sigma: 0.1,
            gamma: 1.0,
            jump_rate: 2.0,
            lending: DeterministicFn::Constant(0.01),
            borrowing: DeterministicFn::Constant(0.03),
            kappa: 0.05,
            horizon: 1.0,
        }
    }
}

pub struct DriverCatalog {
    drivers: Vec<Arc<dyn Driver>>,
}

impl DriverCatalog {
    pub fn get(&self, name: &str) -> Option<Arc<dyn Driver>> {
        self.drivers.iter().find(|d| d.name() == name).cloned()
    }

    pub fn names(&self) -> Vec<&str> {
        self.drivers.iter().map(|d| d.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Arc<dyn Driver>> {
        self.drivers.iter()
    }
}

pub fn builtin_drivers(p: &DriverParams) -> DriverCatalog {
    DriverCatalog {
        drivers: vec![
            Arc::new(ZeroDriver),
            Arc::new(LinearMarketDriver::new(p.mu, p.sigma)),
            Arc::new(BondDriver { rate: RateSource::State }),
            Arc::new(AmbiguousRateDriver::new(p.lending.clone(), p.borrowing.clone(), p.horizon)),
            Arc::new(EntropicBrownianDriver { gamma: p.gamma }),
            Arc::new(EntropicJumpDriver { gamma: p.gamma, intensity: p.jump_rate }),
            Arc::new(LinearMarketDriver::jump_market(p.mu, p.sigma)),
            Arc::new(LinearYDriver { kappa: p.kappa }),
            Arc::new(PositivePartDriver),
        ],
    }
}

/// Probe the driver at random points and confirm every declared shape flag.
pub fn check_flags(driver: &dyn Driver, seed: u64, n_probes: usize) -> Result<()> {
    let flags = driver.flags();
    let mut rng = path_rng(seed, 0);
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-10 * (1.0 + a.abs().max(b.abs()));
    let fail = |flag: &'static str, detail: String| EngineError::FlagViolation {
        driver: driver.name().to_string(),
        flag,
        detail,
    };
    for _ in 0..n_probes {
        let t: f64 = rng.random_range(0.0..1.0);
        let y: f64 = rng.random_range(-10.0..10.0);
        let y2: f64 = rng.random_range(-10.0..10.0);
        let z = [rng.random_range(-5.0..5.0)];
        let u: f64 = rng.random_range(-1.0..1.0);
        let s: f64 = rng.random_range(0.0..0.1);
        let g = |y: f64, z: &[f64], u: f64| driver.evaluate(t, y, z, u, s);
        let base = g(y, &z, u);
        if flags.contains(DriverFlags::Y_INDEPENDENT) && !close(base, g(y2, &z, u)) {
            return Err(fail("y_independent", format!("g({y}) != g({y2})")));
        }
        if flags.contains(DriverFlags::POSITIVELY_HOMOGENEOUS) {
            let a: f64 = rng.random_range(0.0..3.0);
            if !close(g(a * y, &[a * z[0]], a * u), a * base) {
                return Err(fail("positively_homogeneous", format!("scale {a} at y = {y}")));
            }
        }
        if flags.contains(DriverFlags::CONVEX_IN_Y) {
            let mid = g(0.5 * (y + y2), &z, u);
            let chord = 0.5 * (base + g(y2, &z, u));
            if mid > chord + 1e-10 * (1.0 + chord.abs()) {
                return Err(fail("convex_in_y", format!("midpoint of {y}, {y2}")));
            }
        }
        if flags.contains(DriverFlags::NONDECREASING_IN_Y) {
            let (lo, hi) = (y.min(y2), y.max(y2));
            if g(lo, &z, u) > g(hi, &z, u) + 1e-12 {
                return Err(fail("nondecreasing_in_y", format!("between {lo} and {hi}")));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_driver_is_zero() {
        assert_eq!(ZeroDriver.evaluate(0.3, 5.0, &[2.0], 1.0, 0.1), 0.0);
    }

    #[test]
    fn entropic_unit_exposure() {
        assert_eq!(EntropicBrownianDriver { gamma: 2.0 }.evaluate(0.0, 0.0, &[1.0], 0.0, 0.0), 1.0);
    }

    #[test]
    fn ambiguous_sign_bookkeeping() {
        let d = AmbiguousRateDriver::new(DeterministicFn::Constant(0.01), DeterministicFn::Constant(0.03), 1.0);
        assert!((d.evaluate(0.0, -1.0, &[0.0], 0.0, 0.0) - 0.03).abs() < 1e-16);
        assert!((d.evaluate(0.0, 2.0, &[0.0], 0.0, 0.0) + 0.02).abs() < 1e-16);
        assert!(d.flags().contains(DriverFlags::CONVEX_IN_Y));
    }

    #[test]
    fn every_builtin_is_consistent_with_its_flags() {
        let cat = builtin_drivers(&DriverParams::default());
        assert_eq!(cat.names().len(), 9);
        for d in cat.iter() {
            check_flags(d.as_ref(), 17, 2000).unwrap();
        }
        let e = cat.get("entropic_brownian").unwrap().flags();
        assert!(e.contains(DriverFlags::Y_INDEPENDENT | DriverFlags::CONVEX_IN_Y | DriverFlags::QUADRATIC));
    }

    struct Mislabelled;
    impl Driver for Mislabelled {
        fn name(&self) -> &str {
            "mislabelled"
        }
        fn flags(&self) -> DriverFlags {
            DriverFlags::Y_INDEPENDENT
        }
        fn evaluate(&self, _: f64, y: f64, _: &[f64], _: f64, _: f64) -> f64 {
            y * y
        }
    }

    #[test]
    fn probes_catch_wrong_flags() {
        assert!(matches!(check_flags(&Mislabelled, 1, 100), Err(EngineError::FlagViolation { .. })));
    }
}
