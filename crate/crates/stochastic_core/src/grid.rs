use crate::error::require;
use crate::Result;

/// Uniform grid `t_k = k·dt` on `[0, T]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    horizon: f64,
    n_steps: usize,
}

pub fn make_time_grid(horizon: f64, n_steps: usize) -> Result<TimeGrid> {
    require(horizon.is_finite() && horizon > 0.0, "horizon", horizon, "must be > 0")?;
    require(n_steps >= 1, "n_steps", n_steps as f64, "must be >= 1")?;
    Ok(TimeGrid { horizon, n_steps })
}

impl TimeGrid {
    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn n_points(&self) -> usize {
        self.n_steps + 1
    }

    pub fn dt(&self) -> f64 {
        self.horizon / self.n_steps as f64
    }

    /// Grid time of index `k`; the last point is exactly `T`.
    pub fn time(&self, k: usize) -> f64 {
        if k == self.n_steps {
            self.horizon
        } else {
            k as f64 * self.dt()
        }
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.n_points()).map(|k| self.time(k)).collect()
    }

    /// Index of the grid point nearest to `t` (clamped to the grid).
    pub fn nearest_index(&self, t: f64) -> usize {
        let k = (t / self.dt()).round();
        if k <= 0.0 {
            0
        } else {
            (k as usize).min(self.n_steps)
        }
    }

    /// Index of `t` if it lies on the grid up to a relative `1e-9·dt`.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let k = self.nearest_index(t);
        ((self.time(k) - t).abs() <= 1e-9 * self.dt()).then_some(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn daily_grid() {
        let g = make_time_grid(1.0, 252).unwrap();
        assert_eq!(g.dt(), 1.0 / 252.0);
        assert_eq!(g.time(252), 1.0);
        assert_eq!(g.n_points(), 253);
    }

    #[test]
    fn minimal_grid() {
        let g = make_time_grid(1.0, 1).unwrap();
        assert_eq!(g.times(), vec![0.0, 1.0]);
    }

    #[test]
    fn half_year_grid() {
        let g = make_time_grid(2.0, 4).unwrap();
        assert_eq!(g.times(), vec![0.0, 0.5, 1.0, 1.5, 2.0]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(make_time_grid(0.0, 10).is_err());
        assert!(make_time_grid(-1.0, 10).is_err());
        assert!(make_time_grid(1.0, 0).is_err());
    }

    #[test]
    fn index_lookup() {
        let g = make_time_grid(1.0, 252).unwrap();
        assert_eq!(g.index_of(0.25), Some(63));
        assert_eq!(g.index_of(0.1), None);
        assert_eq!(g.nearest_index(0.1), 25);
    }
}
