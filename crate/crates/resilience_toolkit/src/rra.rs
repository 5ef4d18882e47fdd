use stochastic_core::stats::MeanSe;
use stochastic_core::{PathMatrix, TimeGrid};

use crate::error::invalid;
use crate::{RateCurve, Result};

/// Weight `c_s ≥ 0` applied to the rate in the adjustment.
#[derive(Debug, Clone, PartialEq)]
pub enum Rescale {
    Constant(f64),
    /// `c_s = 1` where `ρ̇_s > 0`, else 0.
    OneSided,
    /// Piecewise-linear weights on user-supplied knots.
    Grid(RateCurve),
}

impl Rescale {
    fn validate(&self) -> Result<()> {
        let ok = match self {
            Rescale::Constant(k) => k.is_finite() && *k >= 0.0,
            Rescale::OneSided => true,
            Rescale::Grid(c) => c.values().iter().all(|v| *v >= 0.0),
        };
        if ok {
            Ok(())
        } else {
            Err(invalid("rescale", "weights must be finite and >= 0"))
        }
    }

    pub fn at(&self, curve: &RateCurve, s: f64) -> f64 {
        match self {
            Rescale::Constant(k) => *k,
            Rescale::OneSided => {
                if curve.value(s) > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Rescale::Grid(c) => c.value(s),
        }
    }
}

fn positive_part_integral(curve: &RateCurve, a: f64, b: f64) -> f64 {
    curve
        .nodes(a, b)
        .windows(2)
        .map(|w| {
            let (h, v0, v1) = (w[1] - w[0], curve.value(w[0]), curve.value(w[1]));
            if v0 >= 0.0 && v1 >= 0.0 {
                0.5 * h * (v0 + v1)
            } else if v0 <= 0.0 && v1 <= 0.0 {
                0.0
            } else {
                let p = v0.max(v1);
                0.5 * h * p * p / (v0.abs() + v1.abs())
            }
        })
        .sum()
}

/// `RRA_t = ∫ₜᵀ c_s·ρ̇_s ds`; trapezoid rule on the union of knots.
pub fn rra(curve: &RateCurve, c: &Rescale, t: f64) -> Result<f64> {
    c.validate()?;
    let horizon = curve.horizon();
    if !(0.0..=horizon).contains(&t) {
        return Err(invalid("t", "must lie in [0, T]"));
    }
    Ok(match c {
        Rescale::Constant(k) => k * curve.integral(t, horizon),
        Rescale::OneSided => positive_part_integral(curve, t, horizon),
        Rescale::Grid(w) => {
            let mut nodes = curve.nodes(t, horizon);
            nodes.extend(w.times().iter().copied().filter(|s| *s > t && *s < horizon));
            nodes.sort_by(f64::total_cmp);
            nodes.dedup();
            nodes
                .windows(2)
                .map(|p| 0.5 * (p[1] - p[0]) * (w.value(p[0]) * curve.value(p[0]) + w.value(p[1]) * curve.value(p[1])))
                .sum()
        }
    })
}

/// `ρ^c_t = ρ_t + RRA_t` on every path and grid point.
pub fn adjusted_risk_paths(rho: &PathMatrix, grid: &TimeGrid, curve: &RateCurve, c: &Rescale) -> Result<PathMatrix> {
    if rho.n_points() != grid.n_points() {
        return Err(invalid("rho", "paths do not match the grid"));
    }
    let adj = grid.times().iter().map(|t| rra(curve, c, *t)).collect::<Result<Vec<_>>>()?;
    Ok(rho.map(|k, v| v + adj[k]))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionReport {
    /// Fitted first-order coefficient of `E[ρ^c_{s+h}] − E[ρ^c_s]` in `h`.
    pub slope: f64,
    pub slope_se: f64,
    pub curvature: f64,
    /// `(1 − c_s)·ρ̇_s`.
    pub expected_slope: f64,
    pub offsets: Vec<f64>,
    pub mean_increments: Vec<f64>,
    /// `|mean increment − expected·h| / h` per offset.
    pub residual_ratios: Vec<f64>,
}

impl ExpansionReport {
    pub fn within(&self, k: f64) -> bool {
        (self.slope - self.expected_slope).abs() <= k * self.slope_se
    }
}

/// Per-offset weights giving the linear coefficient of the fit `d ≈ b·h + q·h²`.
fn fit_weights(h: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    if h.len() < 2 {
        return Err(invalid("offsets", "need at least two distinct offsets"));
    }
    let s = |p: i32| h.iter().map(|x| x.powi(p)).sum::<f64>();
    let (s2, s3, s4) = (s(2), s(3), s(4));
    let det = s2 * s4 - s3 * s3;
    if !(det > 1e-14 * s2 * s4) {
        return Err(invalid("offsets", "need at least two distinct offsets"));
    }
    let slope = h.iter().map(|x| (s4 * x - s3 * x * x) / det).collect();
    let curve = h.iter().map(|x| (s2 * x * x - s3 * x) / det).collect();
    Ok((slope, curve))
}

fn report(h: Vec<f64>, increments: &[Vec<f64>], expected: f64) -> Result<ExpansionReport> {
    let (ws, wq) = fit_weights(&h)?;
    let n = increments.len();
    let per_path: Vec<f64> = increments.iter().map(|d| ws.iter().zip(d).map(|(w, v)| w * v).sum()).collect();
    let slope = MeanSe::of(&per_path);
    let mean_increments: Vec<f64> = (0..h.len())
        .map(|j| MeanSe::of(&increments.iter().map(|d| d[j]).collect::<Vec<_>>()).mean)
        .collect();
    let curvature = wq.iter().zip(&mean_increments).map(|(w, v)| w * v).sum();
    let residual_ratios = h.iter().zip(&mean_increments).map(|(x, d)| (d - expected * x).abs() / x).collect();
    Ok(ExpansionReport {
        slope: slope.mean,
        slope_se: if n > 1 { slope.se } else { 0.0 },
        curvature,
        expected_slope: expected,
        offsets: h,
        mean_increments,
        residual_ratios,
    })
}

/// Fits the expansion of the mean adjusted risk at grid index `s_index`
/// over `offsets` (in steps), with path-wise increments for the SE.
pub fn adjusted_risk_expansion_check(
    adjusted: &PathMatrix,
    grid: &TimeGrid,
    s_index: usize,
    offsets: &[usize],
    c_s: f64,
    rate_s: f64,
) -> Result<ExpansionReport> {
    if offsets.iter().any(|o| *o == 0 || s_index + o > grid.n_steps()) {
        return Err(invalid("offsets", "must be >= 1 step and stay within the horizon"));
    }
    let h: Vec<f64> = offsets.iter().map(|o| grid.time(s_index + o) - grid.time(s_index)).collect();
    let increments: Vec<Vec<f64>> = (0..adjusted.n_paths())
        .map(|i| offsets.iter().map(|o| adjusted.get(i, s_index + o) - adjusted.get(i, s_index)).collect())
        .collect();
    report(h, &increments, (1.0 - c_s) * rate_s)
}

/// Same fit on a deterministic mean risk `t ↦ E[ρ_t]`.
pub fn expansion_check_exact(
    mean_risk: &dyn Fn(f64) -> f64,
    curve: &RateCurve,
    c: &Rescale,
    s: f64,
    offsets: &[f64],
    rate_s: f64,
) -> Result<ExpansionReport> {
    let base = mean_risk(s) + rra(curve, c, s)?;
    let d = offsets
        .iter()
        .map(|h| Ok(mean_risk(s + h) + rra(curve, c, s + h)? - base))
        .collect::<Result<Vec<_>>>()?;
    report(offsets.to_vec(), &[d], (1.0 - c.at(curve, s)) * rate_s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_weights() {
        let k = RateCurve::constant(-3.0, 2.0).unwrap();
        assert_eq!(rra(&k, &Rescale::Constant(0.0), 0.5).unwrap(), 0.0);
        assert!((rra(&k, &Rescale::Constant(1.0), 0.5).unwrap() + 4.5).abs() < 1e-14);
    }

    #[test]
    fn one_sided_counts_only_positive_rates() {
        let c = RateCurve::new(vec![0.0, 0.5], vec![-1.0, 1.0], 1.0).unwrap();
        // triangle from 0.25 to 0.5 (area 0.125) plus rectangle 0.5
        assert!((rra(&c, &Rescale::OneSided, 0.0).unwrap() - 0.625).abs() < 1e-14);
    }

    #[test]
    fn grid_weights_on_aligned_knots_are_additive() {
        let curve = RateCurve::new(vec![0.0, 0.25, 0.5, 0.75], vec![1.0, -2.0, 0.5, 3.0], 1.0).unwrap();
        let w = Rescale::Grid(RateCurve::new(vec![0.0, 0.5], vec![0.2, 1.0], 1.0).unwrap());
        let (t, u) = (0.25, 0.5);
        let piece = 0.5 * (u - t) * (0.6 * -2.0 + 1.0 * 0.5);
        let lhs = rra(&curve, &w, t).unwrap();
        let rhs = rra(&curve, &w, u).unwrap() + piece;
        assert!((lhs - rhs).abs() < 1e-15);
    }

    #[test]
    fn exact_expansion_recovers_scaled_rate() {
        // E[ρ_t] = e^{-t}, rate −e^{-t}
        let curve = RateCurve::new((0..100).map(|k| k as f64 / 100.0).collect(), (0..100).map(|k| -(-(k as f64) / 100.0).exp()).collect(), 1.0).unwrap();
        let offsets = [0.0025, 0.005, 0.01, 0.02];
        for c in [0.0, 0.5, 1.0] {
            let r = expansion_check_exact(&|t| (-t).exp(), &curve, &Rescale::Constant(c), 0.3, &offsets, -(-0.3f64).exp()).unwrap();
            assert!((r.slope - r.expected_slope).abs() < 1e-4, "c={c}: {} vs {}", r.slope, r.expected_slope);
        }
    }

    #[test]
    fn rejects_negative_weights() {
        let k = RateCurve::constant(1.0, 1.0).unwrap();
        assert!(rra(&k, &Rescale::Constant(-1.0), 0.0).is_err());
    }
}
