use crate::{CoreError, PathMatrix, Result, TimeGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Stop when the value is `>= c`.
    Above,
    /// Stop when the value is `<= c`.
    Below,
}

impl Direction {
    fn crossed(self, value: f64, c: f64) -> bool {
        match self {
            Direction::Above => value >= c,
            Direction::Below => value <= c,
        }
    }
}

/// Per-path stopping time `τ = T ∧ inf{t_k : value ⋈ c}`.
#[derive(Debug, Clone, PartialEq)]
pub struct StoppingSample {
    pub grid: TimeGrid,
    pub tau: Vec<f64>,
    pub hit: Vec<bool>,
    /// Grid index of τ for hit paths.
    pub hit_index: Vec<Option<usize>>,
}

pub fn first_hitting(process: &PathMatrix, grid: TimeGrid, c: f64, direction: Direction) -> Result<StoppingSample> {
    if process.n_paths() == 0 {
        return Err(CoreError::EmptyEnsemble);
    }
    if process.n_points() != grid.n_points() {
        return Err(CoreError::GridMismatch {
            expected: grid.n_steps(),
            found: process.n_points().saturating_sub(1),
        });
    }
    let hit_index: Vec<Option<usize>> = (0..process.n_paths())
        .map(|i| {
            process.row(i)[..grid.n_steps()]
                .iter()
                .position(|v| direction.crossed(*v, c))
        })
        .collect();
    let tau = hit_index
        .iter()
        .map(|k| k.map_or(grid.horizon(), |k| grid.time(k)))
        .collect();
    let hit = hit_index.iter().map(Option::is_some).collect();
    Ok(StoppingSample { grid, tau, hit, hit_index })
}

impl StoppingSample {
    /// Stopping sample where every path stops at grid index `k`.
    pub fn deterministic(grid: TimeGrid, n_paths: usize, k: usize) -> StoppingSample {
        let stops = k < grid.n_steps();
        StoppingSample {
            grid,
            tau: vec![grid.time(k); n_paths],
            hit: vec![stops; n_paths],
            hit_index: vec![stops.then_some(k); n_paths],
        }
    }

    pub fn n_paths(&self) -> usize {
        self.tau.len()
    }

    pub fn n_hits(&self) -> usize {
        self.hit.iter().filter(|h| **h).count()
    }

    pub fn hit_probability(&self) -> f64 {
        self.n_hits() as f64 / self.n_paths() as f64
    }

    /// `(path, grid index)` of every hit path, in path order.
    pub fn hits(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.hit_index
            .iter()
            .enumerate()
            .filter_map(|(i, k)| k.map(|k| (i, k)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::make_time_grid;

    #[test]
    fn constant_path_never_hits() {
        let g = make_time_grid(1.0, 4).unwrap();
        let p = PathMatrix::from_vec(1, 5, vec![1.0; 5]);
        let s = first_hitting(&p, g, 2.0, Direction::Above).unwrap();
        assert_eq!(s.tau, vec![1.0]);
        assert_eq!(s.hit, vec![false]);
        assert_eq!(s.hit_index, vec![None]);
    }

    #[test]
    fn monotone_crossing() {
        let g = make_time_grid(1.0, 4).unwrap();
        let p = PathMatrix::from_vec(1, 5, vec![0.0, 1.0, 2.0, 3.0, 4.0]);
        let s = first_hitting(&p, g, 1.5, Direction::Above).unwrap();
        assert_eq!(s.tau, vec![0.5]);
        assert_eq!(s.hit_index, vec![Some(2)]);
        let s = first_hitting(&p, g, 0.5, Direction::Below).unwrap();
        assert_eq!(s.hit_index, vec![Some(0)]);
    }

    #[test]
    fn crossing_only_at_maturity_is_not_a_hit() {
        let g = make_time_grid(1.0, 2).unwrap();
        let p = PathMatrix::from_vec(1, 3, vec![0.0, 0.0, 5.0]);
        let s = first_hitting(&p, g, 1.0, Direction::Above).unwrap();
        assert!(!s.hit[0]);
        assert_eq!(s.tau[0], 1.0);
    }

    #[test]
    fn empty_is_an_error() {
        let g = make_time_grid(1.0, 2).unwrap();
        let p = PathMatrix::from_vec(0, 3, vec![]);
        assert_eq!(first_hitting(&p, g, 1.0, Direction::Above), Err(CoreError::EmptyEnsemble));
    }
}
