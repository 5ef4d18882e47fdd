//! Least squares on standardized monomials `1, x̃, …, x̃^d` of a scalar state.

use nalgebra::{DMatrix, DVector, SVD};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegressionError {
    /// The state has no spread; only the constant is identifiable.
    Degenerate,
    RankDeficient,
}

pub struct PolyRegression {
    center: f64,
    scale: f64,
    degree: usize,
    svd: SVD<f64, nalgebra::Dyn, nalgebra::Dyn>,
}

const MAX_CONDITION: f64 = 1e12;

impl PolyRegression {
    pub fn new(x: &[f64], degree: usize) -> Result<PolyRegression, RegressionError> {
        let n = x.len() as f64;
        let center = x.iter().sum::<f64>() / n;
        let var = x.iter().map(|v| (v - center).powi(2)).sum::<f64>() / n;
        let scale = var.sqrt();
        if !(scale > 1e-14 * (1.0 + center.abs())) {
            return Err(RegressionError::Degenerate);
        }
        let p = degree + 1;
        let mut gram = DMatrix::<f64>::zeros(p, p);
        let mut phi = vec![0.0; p];
        for v in x {
            fill_basis((v - center) / scale, &mut phi);
            for a in 0..p {
                for b in a..p {
                    gram[(a, b)] += phi[a] * phi[b];
                }
            }
        }
        for a in 0..p {
            for b in 0..a {
                gram[(a, b)] = gram[(b, a)];
            }
        }
        let svd = SVD::new(gram, true, true);
        let sv = &svd.singular_values;
        let (max, min) = (sv.max(), sv.min());
        if !(min > 0.0) || max / min > MAX_CONDITION {
            return Err(RegressionError::RankDeficient);
        }
        Ok(PolyRegression { center, scale, degree, svd })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficients of the least-squares fit of `y` on the basis at `x`.
    pub fn fit(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let p = self.degree + 1;
        let mut rhs = DVector::<f64>::zeros(p);
        let mut phi = vec![0.0; p];
        for (v, w) in x.iter().zip(y) {
            fill_basis((v - self.center) / self.scale, &mut phi);
            for a in 0..p {
                rhs[a] += phi[a] * w;
            }
        }
        self.svd.solve(&rhs, 0.0).expect("factorisation has both singular vectors").as_slice().to_vec()
    }

    pub fn predict(&self, coef: &[f64], x: f64) -> f64 {
        let s = (x - self.center) / self.scale;
        coef.iter().rev().fold(0.0, |acc, c| acc * s + c)
    }
}

fn fill_basis(s: f64, phi: &mut [f64]) {
    let mut v = 1.0;
    for p in phi.iter_mut() {
        *p = v;
        v *= s;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_cubic() {
        let x: Vec<f64> = (0..200).map(|i| 50.0 + i as f64 * 0.5).collect();
        let y: Vec<f64> = x.iter().map(|v| 1.0 - 0.2 * v + 0.003 * v * v * v).collect();
        let r = PolyRegression::new(&x, 4).unwrap();
        let c = r.fit(&x, &y);
        for (v, w) in x.iter().zip(&y) {
            assert!((r.predict(&c, *v) - w).abs() < 1e-7 * w.abs().max(1.0));
        }
    }

    #[test]
    fn constant_state_is_degenerate() {
        assert_eq!(PolyRegression::new(&[2.0; 10], 2).err(), Some(RegressionError::Degenerate));
    }

    #[test]
    fn too_few_distinct_points_is_rank_deficient() {
        let x: Vec<f64> = (0..100).map(|i| (i % 2) as f64).collect();
        assert_eq!(PolyRegression::new(&x, 4).err(), Some(RegressionError::RankDeficient));
    }
}
