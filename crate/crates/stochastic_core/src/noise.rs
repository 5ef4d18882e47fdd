use rand::Rng;
use rand_distr::{Poisson, StandardNormal};
use rayon::prelude::*;

use crate::error::require;
use crate::rng::path_rng;
use crate::{Result, TimeGrid};

/// Brownian increments and Poisson step counts for every path.
///
/// Layout of `brownian_increments` is `[path][step][dim]`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseBundle {
    pub grid: TimeGrid,
    pub n_paths: usize,
    pub brownian_dim: usize,
    pub jump_rate: f64,
    pub seed: u64,
    brownian_increments: Vec<f64>,
    poisson_counts: Option<Vec<u32>>,
}

pub fn sample_noise(
    grid: TimeGrid,
    n_paths: usize,
    brownian_dim: usize,
    jump_rate: f64,
    seed: u64,
) -> Result<NoiseBundle> {
    require(n_paths >= 1, "n_paths", n_paths as f64, "must be >= 1")?;
    require(brownian_dim >= 1, "brownian_dim", brownian_dim as f64, "must be >= 1")?;
    require(jump_rate.is_finite() && jump_rate >= 0.0, "jump_rate", jump_rate, "must be >= 0")?;

    let n_steps = grid.n_steps();
    let sd = grid.dt().sqrt();
    let lambda = jump_rate * grid.dt();
    let poisson = (lambda > 0.0).then(|| Poisson::new(lambda).expect("positive intensity"));

    let width = n_steps * brownian_dim;
    let mut dw = vec![0.0; n_paths * width];
    let mut counts = poisson.as_ref().map(|_| vec![0u32; n_paths * n_steps]);

    let draw = |i: usize, w: &mut [f64], c: Option<&mut [u32]>| {
        let mut rng = path_rng(seed, i as u64);
        for x in w.iter_mut() {
            let z: f64 = rng.sample(StandardNormal);
            *x = sd * z;
        }
        if let (Some(c), Some(p)) = (c, poisson.as_ref()) {
            for n in c.iter_mut() {
                *n = rng.sample(p) as u32;
            }
        }
    };

    match counts.as_mut() {
        Some(counts) => dw
            .par_chunks_mut(width)
            .zip(counts.par_chunks_mut(n_steps))
            .enumerate()
            .for_each(|(i, (w, c))| draw(i, w, Some(c))),
        None => dw
            .par_chunks_mut(width)
            .enumerate()
            .for_each(|(i, w)| draw(i, w, None)),
    }

    Ok(NoiseBundle {
        grid,
        n_paths,
        brownian_dim,
        jump_rate,
        seed,
        brownian_increments: dw,
        poisson_counts: counts,
    })
}

impl NoiseBundle {
    /// Increment over step `k` (from `t_k` to `t_{k+1}`) in dimension `d`.
    pub fn dw(&self, path: usize, k: usize, d: usize) -> f64 {
        self.brownian_increments[(path * self.grid.n_steps() + k) * self.brownian_dim + d]
    }

    /// All increments of one path in dimension `d`.
    pub fn path_dw(&self, path: usize, d: usize) -> impl Iterator<Item = f64> + '_ {
        (0..self.grid.n_steps()).map(move |k| self.dw(path, k, d))
    }

    pub fn count(&self, path: usize, k: usize) -> u32 {
        match &self.poisson_counts {
            Some(c) => c[path * self.grid.n_steps() + k],
            None => 0,
        }
    }

    pub fn has_jumps(&self) -> bool {
        self.poisson_counts.is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::make_time_grid;
    use crate::stats::{variance_with_se, MeanSe};

    #[test]
    fn zero_rate_has_no_jumps() {
        let g = make_time_grid(1.0, 10).unwrap();
        let n = sample_noise(g, 50, 1, 0.0, 1).unwrap();
        assert!((0..50).all(|i| (0..10).all(|k| n.count(i, k) == 0)));
    }

    #[test]
    fn bit_identical_reruns() {
        let g = make_time_grid(1.0, 20).unwrap();
        let a = sample_noise(g, 100, 2, 3.0, 42).unwrap();
        let b = sample_noise(g, 100, 2, 3.0, 42).unwrap();
        assert_eq!(a, b);
        let c = sample_noise(g, 100, 2, 3.0, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn path_stream_independent_of_ensemble_size() {
        let g = make_time_grid(1.0, 5).unwrap();
        let small = sample_noise(g, 3, 1, 1.0, 9).unwrap();
        let large = sample_noise(g, 300, 1, 1.0, 9).unwrap();
        for k in 0..5 {
            assert_eq!(small.dw(2, k, 0), large.dw(2, k, 0));
            assert_eq!(small.count(2, k), large.count(2, k));
        }
    }

    #[test]
    fn increment_moments() {
        let g = make_time_grid(1.0, 4).unwrap();
        let n = 100_000;
        let noise = sample_noise(g, n, 1, 0.0, 5).unwrap();
        for k in 0..4 {
            let xs: Vec<f64> = (0..n).map(|i| noise.dw(i, k, 0)).collect();
            let m = MeanSe::of(&xs);
            assert!(m.mean.abs() < 4.0 * m.se, "step {k} mean {}", m.mean);
            let (var, se) = variance_with_se(&xs);
            assert!((var - g.dt()).abs() < 4.0 * se, "step {k} var {var}");
        }
    }

    #[test]
    fn poisson_count_mean() {
        let g = make_time_grid(1.0, 10).unwrap();
        let n = 100_000;
        let noise = sample_noise(g, n, 1, 2.0, 11).unwrap();
        let totals: Vec<f64> = (0..n)
            .map(|i| (0..10).map(|k| noise.count(i, k) as f64).sum())
            .collect();
        let m = MeanSe::of(&totals);
        assert!((m.mean - 2.0).abs() < 4.0 * m.se);
    }

    #[test]
    fn rejects_empty_ensemble() {
        let g = make_time_grid(1.0, 10).unwrap();
        assert!(sample_noise(g, 0, 1, 0.0, 1).is_err());
    }
}
