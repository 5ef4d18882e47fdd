//! Standard normal CDF, density and quantile.

use libm::erfc;

use crate::error::domain;
use crate::Result;

const INV_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;
const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

pub fn cdf(x: f64) -> f64 {
    0.5 * erfc(-x * INV_SQRT_2)
}

pub fn pdf(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Quantile by safeguarded Newton iteration inside a shrinking bracket.
pub fn quantile(p: f64) -> Result<f64> {
    domain(p > 0.0 && p < 1.0, "p", p, "must lie in (0, 1)")?;
    if p == 0.5 {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (-38.5, 38.5);
    let mut x = 0.0;
    for _ in 0..200 {
        let f = cdf(x) - p;
        if f == 0.0 {
            return Ok(x);
        }
        if f < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let d = pdf(x);
        let mut next = if d > 0.0 { x - f / d } else { f64::NAN };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 1e-15 * (1.0 + x.abs()) || hi - lo <= 1e-15 * (1.0 + x.abs()) {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent CDF: composite Simpson on the density.
    fn simpson_cdf(x: f64) -> f64 {
        let n = 20_000;
        let h = x / n as f64;
        let mut s = pdf(0.0) + pdf(x);
        for i in 1..n {
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * pdf(i as f64 * h);
        }
        0.5 + s * h / 3.0
    }

    fn bisect_quantile(p: f64) -> f64 {
        let (mut lo, mut hi) = (-10.0, 10.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if simpson_cdf(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn cdf_matches_simpson() {
        for x in [-6.0, -2.5, -1.0, -0.1, 0.0, 0.3, 1.7, 4.0] {
            assert!((cdf(x) - simpson_cdf(x)).abs() < 1e-13, "x = {x}");
        }
    }

    #[test]
    fn quantile_matches_independent_inversion() {
        for p in [0.001, 0.05, 0.25, 0.5, 0.8, 0.975] {
            assert!((quantile(p).unwrap() - bisect_quantile(p)).abs() < 1e-11, "p = {p}");
        }
        assert!((quantile(0.05).unwrap() + 1.644_853_626_951_472_2).abs() < 1e-12);
    }

    #[test]
    fn quantile_round_trip_in_tails() {
        for p in [1e-12, 1e-8, 1e-4, 1.0 - 1e-6] {
            let x = quantile(p).unwrap();
            assert!(((cdf(x) - p) / p.min(1.0 - p)).abs() < 1e-8, "p = {p}");
        }
    }

    #[test]
    fn quantile_domain() {
        assert!(quantile(0.0).is_err());
        assert!(quantile(1.0).is_err());
    }
}
