use crate::error::domain;
use crate::{normal, ClosedFormError, Result};

/// Deterministic coefficient of time: constant or right-continuous piecewise constant.
#[derive(Debug, Clone, PartialEq)]
pub enum DeterministicFn {
    Constant(f64),
    /// `values[j]` holds on `[breaks[j-1], breaks[j])`, with `values.len() == breaks.len() + 1`.
    PiecewiseConstant { breaks: Vec<f64>, values: Vec<f64> },
}

impl DeterministicFn {
    pub fn value(&self, t: f64) -> f64 {
        match self {
            DeterministicFn::Constant(c) => *c,
            DeterministicFn::PiecewiseConstant { breaks, values } => {
                values[breaks.partition_point(|b| *b <= t)]
            }
        }
    }

    fn integral_with(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        match self {
            DeterministicFn::Constant(c) => f(*c) * (b - a),
            DeterministicFn::PiecewiseConstant { breaks, values } => {
                let mut total = 0.0;
                let mut lo = a;
                for (j, v) in values.iter().enumerate() {
                    let hi = breaks.get(j).copied().unwrap_or(f64::INFINITY).min(b);
                    if hi > lo {
                        total += f(*v) * (hi - lo);
                        lo = hi;
                    }
                    if lo >= b {
                        break;
                    }
                }
                total
            }
        }
    }

    pub fn integral(&self, a: f64, b: f64) -> f64 {
        self.integral_with(a, b, |v| v)
    }

    pub fn integral_of_square(&self, a: f64, b: f64) -> f64 {
        self.integral_with(a, b, |v| v * v)
    }
}

/// Claim `X = x0 + ∫₀ᵀ μ ds + ∫₀ᵀ σ dW` with deterministic coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianClaimSpec {
    pub x0: f64,
    pub mu: DeterministicFn,
    pub sigma: DeterministicFn,
    pub horizon: f64,
}

impl GaussianClaimSpec {
    pub fn constant(x0: f64, mu: f64, sigma: f64, horizon: f64) -> Self {
        GaussianClaimSpec {
            x0,
            mu: DeterministicFn::Constant(mu),
            sigma: DeterministicFn::Constant(sigma),
            horizon,
        }
    }

    fn residual_sd(&self, t: f64) -> f64 {
        self.sigma.integral_of_square(t, self.horizon).sqrt()
    }

    fn check(&self, t: f64, alpha: f64) -> Result<()> {
        domain(alpha > 0.0 && alpha < 1.0, "alpha", alpha, "must lie in (0, 1)")?;
        domain((0.0..=self.horizon).contains(&t), "t", t, "must lie in [0, T]")
    }
}

/// Dynamic VaR given the realised stochastic integral `w = ∫₀ᵗ σ dW`.
pub fn var_value(spec: &GaussianClaimSpec, t: f64, alpha: f64, w: f64) -> Result<f64> {
    spec.check(t, alpha)?;
    let z = normal::quantile(alpha)?;
    Ok(spec.x0 + spec.mu.integral(0.0, spec.horizon) + w - z * spec.residual_sd(t))
}

/// Dynamic expected shortfall given `w = ∫₀ᵗ σ dW`.
pub fn es_value(spec: &GaussianClaimSpec, t: f64, alpha: f64, w: f64) -> Result<f64> {
    spec.check(t, alpha)?;
    let z = normal::quantile(alpha)?;
    Ok(spec.x0 + spec.mu.integral(0.0, spec.horizon) + w + normal::pdf(z) / alpha * spec.residual_sd(t))
}

fn rate_factor(spec: &GaussianClaimSpec, t: f64, alpha: f64) -> Result<f64> {
    spec.check(t, alpha)?;
    if t >= spec.horizon {
        return Err(ClosedFormError::Singularity("residual variance vanishes"));
    }
    let sd = spec.residual_sd(t);
    if sd == 0.0 {
        return Err(ClosedFormError::Singularity("residual variance vanishes"));
    }
    let s = spec.sigma.value(t);
    Ok(s * s / sd)
}

pub fn var_rate(spec: &GaussianClaimSpec, t: f64, alpha: f64) -> Result<f64> {
    let f = rate_factor(spec, t, alpha)?;
    Ok(0.5 * normal::quantile(alpha)? * f)
}

pub fn es_rate(spec: &GaussianClaimSpec, t: f64, alpha: f64) -> Result<f64> {
    let f = rate_factor(spec, t, alpha)?;
    Ok(-normal::pdf(normal::quantile(alpha)?) / (2.0 * alpha) * f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> GaussianClaimSpec {
        GaussianClaimSpec::constant(0.0, 0.0, 1.0, 1.0)
    }

    #[test]
    fn median_var_is_mean_path() {
        let s = GaussianClaimSpec::constant(1.0, 0.5, 2.0, 1.0);
        assert_eq!(var_value(&s, 0.3, 0.5, 0.7).unwrap(), 1.0 + 0.5 + 0.7);
        assert_eq!(var_rate(&s, 0.3, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn five_percent_pins() {
        // Frozen from an independent Simpson-CDF inversion: z_0.05 = -1.6448536269514722.
        let z = -1.644_853_626_951_472_2f64;
        let phi = (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt();
        assert!((var_value(&unit(), 0.0, 0.05, 0.0).unwrap() - 1.644_853_626_951_472).abs() < 1e-11);
        assert!((var_rate(&unit(), 0.0, 0.05).unwrap() - z / 2.0).abs() < 1e-11);
        assert!((es_value(&unit(), 0.0, 0.05, 0.0).unwrap() - phi / 0.05).abs() < 1e-11);
        assert!((phi / 0.05 - 2.062_712_807_507_425).abs() < 1e-9);
    }

    #[test]
    fn maturity_values_and_singular_rate() {
        let s = unit();
        assert_eq!(var_value(&s, 1.0, 0.05, 0.4).unwrap(), 0.4);
        assert!(matches!(var_rate(&s, 1.0, 0.05), Err(ClosedFormError::Singularity(_))));
    }

    #[test]
    fn no_residual_risk_collapses_es_to_var() {
        let s = GaussianClaimSpec {
            x0: 2.0,
            mu: DeterministicFn::Constant(0.0),
            sigma: DeterministicFn::PiecewiseConstant { breaks: vec![0.5], values: vec![1.0, 0.0] },
            horizon: 1.0,
        };
        for alpha in [0.01, 0.2, 0.7] {
            let v = var_value(&s, 0.6, alpha, 0.3).unwrap();
            let e = es_value(&s, 0.6, alpha, 0.3).unwrap();
            assert_eq!(v, 2.3);
            assert_eq!(e, 2.3);
        }
    }

    #[test]
    fn sign_trichotomy_and_dominance() {
        let s = unit();
        for j in 1..100 {
            let alpha = j as f64 / 100.0;
            let vr = var_rate(&s, 0.2, alpha).unwrap();
            if alpha < 0.5 {
                assert!(vr < 0.0);
                assert!(es_value(&s, 0.2, alpha, 0.0).unwrap() >= var_value(&s, 0.2, alpha, 0.0).unwrap());
            } else if alpha > 0.5 {
                assert!(vr > 0.0);
            } else {
                assert_eq!(vr, 0.0);
            }
            assert!(es_rate(&s, 0.2, alpha).unwrap() < 0.0);
        }
    }

    #[test]
    fn piecewise_integrals() {
        let f = DeterministicFn::PiecewiseConstant { breaks: vec![1.0, 2.0], values: vec![1.0, 3.0, 2.0] };
        assert_eq!(f.value(0.5), 1.0);
        assert_eq!(f.value(1.0), 3.0);
        assert_eq!(f.integral(0.5, 2.5), 0.5 + 3.0 + 1.0);
        assert_eq!(f.integral_of_square(0.0, 3.0), 1.0 + 9.0 + 4.0);
    }

    #[test]
    fn alpha_domain() {
        assert!(var_value(&unit(), 0.0, 0.0, 0.0).is_err());
        assert!(es_value(&unit(), 0.0, 1.0, 0.0).is_err());
    }
}
