use crate::error::domain;
use crate::{ClosedFormError, Result};

const MAX_EXP: f64 = 709.0;

fn log_mean_exp(gamma: f64, xs: &[f64]) -> Result<f64> {
    let m = xs.iter().fold(f64::NEG_INFINITY, |m, x| m.max(gamma * x));
    if !m.is_finite() || m > MAX_EXP {
        return Err(ClosedFormError::Scaling { max_exponent: m });
    }
    let mut sum = 0.0;
    let mut comp = 0.0;
    for x in xs {
        let v = (gamma * x - m).exp();
        let t = sum + v;
        comp += if sum >= v { (sum - t) + v } else { (v - t) + sum };
        sum = t;
    }
    Ok(m + ((sum + comp) / xs.len() as f64).ln())
}

/// `(1/γ)·ln` of the empirical mean of `e^{γX}`.
pub fn entropic_value(gamma: f64, samples: &[f64]) -> Result<f64> {
    domain(gamma > 0.0, "gamma", gamma, "must be > 0")?;
    domain(!samples.is_empty(), "samples", 0.0, "need at least one sample")?;
    Ok(log_mean_exp(gamma, samples)? / gamma)
}

/// Entropic value conditional on a discrete state: one value per label `0..n_groups`.
pub fn entropic_value_conditional(gamma: f64, samples: &[f64], labels: &[usize], n_groups: usize) -> Result<Vec<f64>> {
    domain(samples.len() == labels.len(), "labels", labels.len() as f64, "one label per sample")?;
    let mut groups = vec![Vec::new(); n_groups];
    for (x, l) in samples.iter().zip(labels) {
        domain(*l < n_groups, "label", *l as f64, "must be below n_groups")?;
        groups[*l].push(*x);
    }
    groups.iter().map(|g| entropic_value(gamma, g)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certainty_equivalent_of_constant() {
        let v = entropic_value(0.7, &[3.25; 10]).unwrap();
        assert!((v - 3.25).abs() < 1e-15);
    }

    #[test]
    fn small_gamma_expansion() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37 % 101) as f64 / 100.0) - 0.5).collect();
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        for gamma in [1e-3, 1e-2] {
            let v = entropic_value(gamma, &xs).unwrap();
            let excess = (v - mean) / gamma;
            assert!((excess - var / 2.0).abs() < 0.02 * var, "γ={gamma}: {excess} vs {}", var / 2.0);
        }
    }

    #[test]
    fn overflow_is_reported() {
        assert!(matches!(entropic_value(1.0, &[0.0, 800.0]), Err(ClosedFormError::Scaling { .. })));
    }

    #[test]
    fn conditional_groups() {
        let v = entropic_value_conditional(1.0, &[1.0, 2.0, 1.0, 2.0], &[0, 1, 0, 1], 2).unwrap();
        assert!((v[0] - 1.0).abs() < 1e-15 && (v[1] - 2.0).abs() < 1e-15);
        assert!(entropic_value_conditional(1.0, &[1.0], &[0], 2).is_err());
    }
}
