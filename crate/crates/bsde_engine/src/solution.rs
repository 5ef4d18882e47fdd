use stochastic_core::{PathMatrix, TimeGrid};

use crate::error::invalid;
use crate::{EngineError, Result};

/// Sampled BSDE solution `(ρ, Z, U)` with the Markov state the driver may read.
#[derive(Debug, Clone)]
pub struct SolutionSample {
    pub grid: TimeGrid,
    pub rho: PathMatrix,
    /// One matrix per Brownian dimension.
    pub z: Vec<PathMatrix>,
    /// Scalar jump component (the jump of ρ at a jump time), if any.
    pub u: Option<PathMatrix>,
    pub state: Option<PathMatrix>,
}

impl SolutionSample {
    pub fn new(
        grid: TimeGrid,
        rho: PathMatrix,
        z: Vec<PathMatrix>,
        u: Option<PathMatrix>,
        state: Option<PathMatrix>,
    ) -> Result<SolutionSample> {
        if z.is_empty() {
            return Err(invalid("z", "need at least one Brownian component"));
        }
        let shape = (rho.n_paths(), grid.n_points());
        let same = |m: &PathMatrix| (m.n_paths(), m.n_points()) == shape;
        if rho.n_points() != grid.n_points()
            || !z.iter().all(same)
            || !u.iter().all(same)
            || !state.iter().all(same)
        {
            return Err(invalid("solution", "component shapes differ from the grid"));
        }
        Ok(SolutionSample { grid, rho, z, u, state })
    }

    pub fn n_paths(&self) -> usize {
        self.rho.n_paths()
    }

    pub fn brownian_dim(&self) -> usize {
        self.z.len()
    }

    /// Confirm `ρ_T` equals the terminal payoff on every path.
    pub fn check_terminal(&self, payoff: &[f64]) -> Result<()> {
        let n = self.grid.n_steps();
        match (0..self.n_paths()).find(|&i| self.rho.get(i, n) != payoff[i]) {
            None => Ok(()),
            Some(i) => Err(EngineError::Invariant(format!(
                "path {i}: rho_T = {} but payoff = {}",
                self.rho.get(i, n),
                payoff[i]
            ))),
        }
    }

    /// Solution for the payoff `X + h`, valid for drivers independent of `y`.
    pub fn shifted(&self, h: f64) -> SolutionSample {
        SolutionSample { rho: self.rho.map(|_, v| v + h), ..self.clone() }
    }

    /// Solution for `αX`, valid for positively homogeneous drivers and `α ≥ 0`.
    pub fn scaled(&self, alpha: f64) -> SolutionSample {
        SolutionSample {
            rho: self.rho.map(|_, v| alpha * v),
            z: self.z.iter().map(|m| m.map(|_, v| alpha * v)).collect(),
            u: self.u.as_ref().map(|m| m.map(|_, v| alpha * v)),
            ..self.clone()
        }
    }

    /// Restriction to `[0, t_last]`: the solution with terminal claim `ρ_{t_last}`.
    pub fn truncated(&self, last: usize) -> Result<SolutionSample> {
        let grid = stochastic_core::make_time_grid(self.grid.time(last), last)?;
        Ok(SolutionSample {
            grid,
            rho: self.rho.truncate_points(last),
            z: self.z.iter().map(|m| m.truncate_points(last)).collect(),
            u: self.u.as_ref().map(|m| m.truncate_points(last)),
            state: self.state.as_ref().map(|m| m.truncate_points(last)),
        })
    }
}
