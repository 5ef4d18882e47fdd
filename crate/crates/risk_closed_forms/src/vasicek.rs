use crate::error::domain;
use crate::Result;

/// Zero-coupon bond maturing at `horizon` under a Vasicek short rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VasicekBondSpec {
    pub r0: f64,
    pub a: f64,
    pub b: f64,
    pub sigma: f64,
    pub horizon: f64,
}

impl VasicekBondSpec {
    fn check(&self, t: f64) -> Result<()> {
        domain(self.a > 0.0, "a", self.a, "mean-reversion speed must be > 0")?;
        domain((0.0..=self.horizon).contains(&t), "t", t, "must lie in [0, T]")
    }

    pub fn b_coef(&self, t: f64) -> f64 {
        -(-self.a * (self.horizon - t)).exp_m1() / self.a
    }

    pub fn a_coef(&self, t: f64) -> f64 {
        let tau = self.horizon - t;
        let b = self.b_coef(t);
        let a = self.a;
        -self.sigma * self.sigma / (4.0 * a * a) * (a * b * b + 2.0 * b - 2.0 * tau) + self.b * (b - tau)
    }

    /// `E[r_t]`.
    pub fn mean(&self, t: f64) -> f64 {
        let e = (-self.a * t).exp();
        self.r0 * e + self.b * (1.0 - e)
    }

    /// `Var[r_t]`.
    pub fn variance(&self, t: f64) -> f64 {
        -self.sigma * self.sigma * (-2.0 * self.a * t).exp_m1() / (2.0 * self.a)
    }

    pub fn price(&self, t: f64, r: f64) -> f64 {
        (self.a_coef(t) - self.b_coef(t) * r).exp()
    }

    /// Volatility exposure `Z = −σ·B_t·P`.
    pub fn z(&self, t: f64, r: f64) -> f64 {
        -self.sigma * self.b_coef(t) * self.price(t, r)
    }

    /// `E[P(t, r_t)]`.
    pub fn mean_price(&self, t: f64) -> f64 {
        let b = self.b_coef(t);
        (self.a_coef(t) - b * self.mean(t) + 0.5 * b * b * self.variance(t)).exp()
    }

    /// `E[r_t·P(t, r_t)]`.
    pub fn rate(&self, t: f64) -> f64 {
        let (b, m, v) = (self.b_coef(t), self.mean(t), self.variance(t));
        (m - b * v) * (self.a_coef(t) + 0.5 * v * b * b - m * b).exp()
    }
}

pub fn vasicek_bond_price(spec: &VasicekBondSpec, t: f64, r: f64) -> Result<f64> {
    spec.check(t)?;
    Ok(spec.price(t, r))
}

pub fn vasicek_rate_t(spec: &VasicekBondSpec, t: f64) -> Result<f64> {
    spec.check(t)?;
    Ok(spec.rate(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gaussian_expectation;

    fn fig2() -> VasicekBondSpec {
        VasicekBondSpec { r0: 0.02, a: 1.0, b: 0.02, sigma: 0.01, horizon: 1.0 }
    }

    #[test]
    fn deterministic_discounting() {
        let s = VasicekBondSpec { sigma: 0.0, ..fig2() };
        for t in [0.0, 0.4, 1.0] {
            let p = vasicek_bond_price(&s, t, 0.02).unwrap();
            assert!((p - (-0.02 * (1.0 - t)).exp()).abs() < 1e-15);
            let r = vasicek_rate_t(&s, t).unwrap();
            assert!((r - 0.02 * (-0.02 * (1.0 - t)).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn rate_matches_gaussian_quadrature() {
        let s = fig2();
        for t in [0.0, 0.3, 0.7] {
            let (m, sd) = (s.mean(t), s.variance(t).sqrt());
            let q = gaussian_expectation(|z| (m + sd * z) * s.price(t, m + sd * z), 1e-12).unwrap();
            assert!((q - s.rate(t)).abs() < 1e-13, "t={t}");
        }
        // Frozen from the quadrature route above.
        assert!((s.rate(0.0) - 0.02 * s.price(0.0, 0.02)).abs() < 1e-16);
    }

    #[test]
    fn rate_is_derivative_of_mean_price() {
        let s = VasicekBondSpec { r0: 0.02, a: 1.0, b: 0.04, sigma: 0.01, horizon: 1.0 };
        let h = 1e-5;
        for t in [0.1, 0.5, 0.9] {
            let fd = (s.mean_price(t + h) - s.mean_price(t - h)) / (2.0 * h);
            assert!((fd - s.rate(t)).abs() < 1e-9, "t={t}");
        }
    }

    #[test]
    fn rate_tends_to_terminal_mean_linearly() {
        let s = fig2();
        let target = s.mean(1.0);
        let errs: Vec<f64> = (2..=5).map(|k| (s.rate(1.0 - 10f64.powi(-k)) - target).abs()).collect();
        for w in errs.windows(2) {
            assert!(w[1] < w[0]);
        }
        for k in 2..=5 {
            let h = 10f64.powi(-k);
            let ratio = (s.rate(1.0 - h) - target).abs() / (s.rate(1.0 - h / 2.0) - target).abs();
            assert!((ratio - 2.0).abs() < 0.05, "k={k}: {ratio}");
        }
    }

    #[test]
    fn rejects_bad_speed() {
        let s = VasicekBondSpec { a: 0.0, ..fig2() };
        assert!(vasicek_rate_t(&s, 0.0).is_err());
    }
}
