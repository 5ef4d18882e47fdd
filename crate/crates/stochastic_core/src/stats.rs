//! Order-fixed, compensated reductions so results do not depend on the
//! parallel schedule.

/// Neumaier-compensated sum, accumulated in slice order.
pub fn neumaier_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Sample mean with its plain standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanSe {
    pub mean: f64,
    pub se: f64,
    pub n: usize,
}

impl MeanSe {
    pub fn of(values: &[f64]) -> MeanSe {
        let n = values.len();
        if n == 0 {
            return MeanSe { mean: f64::NAN, se: f64::NAN, n };
        }
        let mean = neumaier_sum(values.iter().copied()) / n as f64;
        let se = if n > 1 {
            let ss = neumaier_sum(values.iter().map(|v| (v - mean) * (v - mean)));
            (ss / (n - 1) as f64 / n as f64).sqrt()
        } else {
            0.0
        };
        MeanSe { mean, se, n }
    }

    /// Sample variance (unbiased).
    pub fn variance(&self) -> f64 {
        self.se * self.se * self.n as f64
    }
}

/// Mean and SE of the sample variance, from the fourth central moment.
pub fn variance_with_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = neumaier_sum(values.iter().copied()) / n;
    let m2 = neumaier_sum(values.iter().map(|v| (v - mean).powi(2))) / n;
    let m4 = neumaier_sum(values.iter().map(|v| (v - mean).powi(4))) / n;
    let var = m2 * n / (n - 1.0);
    (var, ((m4 - m2 * m2) / n).max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let v = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(neumaier_sum(v), 2.0);
    }

    #[test]
    fn mean_and_se() {
        let m = MeanSe::of(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m.mean, 2.5);
        let expected = (1.25f64 * 4.0 / 3.0 / 4.0).sqrt();
        assert!((m.se - expected).abs() < 1e-15);
        assert_eq!(MeanSe::of(&[5.0]).se, 0.0);
    }
}
