use bsde_engine::{Driver, DriverFlags, SolutionSample};

use crate::RateCurve;

/// `g̃(t, y, z, u) = g(t, y − ∫ₜᵀ ρ̇_s ds, z, u) + ρ̇_t`.
pub struct NeutralizedDriver<D> {
    base: D,
    curve: RateCurve,
    name: String,
}

pub fn resilience_neutral_driver<D: Driver>(base: D, curve: RateCurve) -> NeutralizedDriver<D> {
    let name = format!("neutral({})", base.name());
    NeutralizedDriver { base, curve, name }
}

impl<D> NeutralizedDriver<D> {
    pub fn curve(&self) -> &RateCurve {
        &self.curve
    }
}

impl<D: Driver> Driver for NeutralizedDriver<D> {
    fn name(&self) -> &str {
        &self.name
    }

    fn flags(&self) -> DriverFlags {
        let mut f = self.base.flags();
        if self.curve.values().iter().any(|v| *v != 0.0) {
            f.remove(DriverFlags::POSITIVELY_HOMOGENEOUS);
        }
        f
    }

    fn evaluate(&self, t: f64, y: f64, z: &[f64], u: f64, state: f64) -> f64 {
        let y_base = if self.base.flags().contains(DriverFlags::Y_INDEPENDENT) {
            y
        } else {
            y - self.curve.integral_to_horizon(t)
        };
        self.base.evaluate(t, y_base, z, u, state) + self.curve.value(t)
    }
}

/// Solution of the neutralized equation: `ρ_t + ∫ₜᵀ ρ̇_s ds` on every path.
pub fn neutral_solution(sol: &SolutionSample, curve: &RateCurve) -> SolutionSample {
    let tail: Vec<f64> = sol.grid.times().iter().map(|t| curve.integral_to_horizon(*t)).collect();
    SolutionSample { rho: sol.rho.map(|k, v| v + tail[k]), ..sol.clone() }
}
