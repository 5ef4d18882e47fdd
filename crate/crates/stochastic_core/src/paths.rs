use rayon::prelude::*;

use crate::TimeGrid;

/// Dense `n_paths × n_points` matrix stored path-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PathMatrix {
    n_paths: usize,
    n_points: usize,
    data: Vec<f64>,
}

impl PathMatrix {
    pub fn from_vec(n_paths: usize, n_points: usize, data: Vec<f64>) -> PathMatrix {
        assert_eq!(data.len(), n_paths * n_points, "path matrix shape");
        PathMatrix { n_paths, n_points, data }
    }

    /// Fill each row in parallel; `fill(i, row)` must depend only on `i`.
    pub fn from_rows<F>(n_paths: usize, n_points: usize, fill: F) -> PathMatrix
    where
        F: Fn(usize, &mut [f64]) + Sync,
    {
        let mut data = vec![0.0; n_paths * n_points];
        data.par_chunks_mut(n_points.max(1))
            .enumerate()
            .for_each(|(i, row)| fill(i, row));
        PathMatrix { n_paths, n_points, data }
    }

    pub fn n_paths(&self) -> usize {
        self.n_paths
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n_points..(i + 1) * self.n_points]
    }

    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.data[i * self.n_points + k]
    }

    pub fn column(&self, k: usize) -> Vec<f64> {
        (0..self.n_paths).map(|i| self.get(i, k)).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Elementwise map `f(k, value)` keeping the shape.
    pub fn map<F>(&self, f: F) -> PathMatrix
    where
        F: Fn(usize, f64) -> f64 + Sync,
    {
        PathMatrix::from_rows(self.n_paths, self.n_points, |i, row| {
            for (k, (out, v)) in row.iter_mut().zip(self.row(i)).enumerate() {
                *out = f(k, *v);
            }
        })
    }

    /// Keep grid points `0..=last`.
    pub fn truncate_points(&self, last: usize) -> PathMatrix {
        let n = last + 1;
        PathMatrix::from_rows(self.n_paths, n, |i, row| row.copy_from_slice(&self.row(i)[..n]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelTag {
    Gbm,
    Vasicek,
    JumpGbm,
    BrownianArith,
}

/// Simulated state of a model on every grid point of every path.
#[derive(Debug, Clone)]
pub struct StatePaths {
    pub model: ModelTag,
    pub grid: TimeGrid,
    pub values: PathMatrix,
}

impl StatePaths {
    pub fn n_paths(&self) -> usize {
        self.values.n_paths()
    }

    pub fn terminal(&self) -> Vec<f64> {
        self.values.column(self.grid.n_steps())
    }
}
