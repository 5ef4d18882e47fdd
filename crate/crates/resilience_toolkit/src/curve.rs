use crate::error::invalid;
use crate::Result;

/// Piecewise-linear map `t ↦ ρ̇_t` on knots in `[0, T)`, held constant
/// before the first and after the last knot.
#[derive(Debug, Clone, PartialEq)]
pub struct RateCurve {
    times: Vec<f64>,
    values: Vec<f64>,
    horizon: f64,
}

impl RateCurve {
    pub fn new(times: Vec<f64>, values: Vec<f64>, horizon: f64) -> Result<RateCurve> {
        if times.is_empty() || times.len() != values.len() {
            return Err(invalid("rate_curve", "need equally many knots and values, at least one"));
        }
        if !(horizon > 0.0) || times[0] < 0.0 || *times.last().unwrap() >= horizon {
            return Err(invalid("rate_curve", "knots must lie in [0, T)"));
        }
        if times.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(invalid("rate_curve", "knots must be strictly increasing"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("rate_curve", "values must be finite"));
        }
        Ok(RateCurve { times, values, horizon })
    }

    pub fn constant(value: f64, horizon: f64) -> Result<RateCurve> {
        RateCurve::new(vec![0.0], vec![value], horizon)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn value(&self, t: f64) -> f64 {
        let j = self.times.partition_point(|s| *s <= t);
        if j == 0 {
            return self.values[0];
        }
        if j == self.times.len() {
            return self.values[j - 1];
        }
        let (t0, t1) = (self.times[j - 1], self.times[j]);
        let w = (t - t0) / (t1 - t0);
        self.values[j - 1] + w * (self.values[j] - self.values[j - 1])
    }

    /// Knots of the interpolant inside `(a, b)` together with both endpoints.
    pub(crate) fn nodes(&self, a: f64, b: f64) -> Vec<f64> {
        let mut nodes = vec![a];
        nodes.extend(self.times.iter().copied().filter(|s| *s > a && *s < b));
        nodes.push(b);
        nodes
    }

    /// `∫_a^b ρ̇_s ds`, exact for the piecewise-linear interpolant.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        self.nodes(a, b)
            .windows(2)
            .map(|w| 0.5 * (w[1] - w[0]) * (self.value(w[0]) + self.value(w[1])))
            .sum()
    }

    pub fn integral_to_horizon(&self, t: f64) -> f64 {
        self.integral(t, self.horizon)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_and_flat_ends() {
        let c = RateCurve::new(vec![0.2, 0.6], vec![1.0, 3.0], 1.0).unwrap();
        assert_eq!(c.value(0.0), 1.0);
        assert_eq!(c.value(0.4), 2.0);
        assert_eq!(c.value(0.9), 3.0);
        // 0.2·1 + 0.4·2 + 0.4·3
        assert!((c.integral(0.0, 1.0) - 2.2).abs() < 1e-14);
    }

    #[test]
    fn rejects_knot_at_horizon() {
        assert!(RateCurve::new(vec![0.0, 1.0], vec![0.0, 0.0], 1.0).is_err());
        assert!(RateCurve::new(vec![0.5, 0.5], vec![0.0, 0.0], 1.0).is_err());
    }
}
