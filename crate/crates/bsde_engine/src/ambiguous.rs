use risk_closed_forms::DeterministicFn;
use stochastic_core::stats::MeanSe;

use crate::error::invalid;
use crate::{Instant, Method, RateEstimate, Result};

/// Value and rate at `t` under separate lending (`r`) and borrowing (`R`)
/// rates, from terminal payoff samples. Positive and negative parts of the
/// claim are discounted at `r` and `R` respectively.
pub fn ambiguous_rate_value_and_rate(
    lending: &DeterministicFn,
    borrowing: &DeterministicFn,
    payoff: &[f64],
    t: f64,
    horizon: f64,
) -> Result<(f64, RateEstimate)> {
    if payoff.is_empty() {
        return Err(invalid("payoff", "no samples"));
    }
    if !(0.0..=horizon).contains(&t) {
        return Err(invalid("t", "must lie in [0, T]"));
    }
    let (r, big_r) = (lending.value(t), borrowing.value(t));
    if !(0.0 <= r && r <= big_r) {
        return Err(invalid("rates", format!("need 0 <= r <= R at t = {t}, got r = {r}, R = {big_r}")));
    }
    let dr = (-lending.integral(t, horizon)).exp();
    let d_big = (-borrowing.integral(t, horizon)).exp();
    let values: Vec<f64> = payoff.iter().map(|x| dr * x.max(0.0) - d_big * (-x).max(0.0)).collect();
    let rates: Vec<f64> = payoff
        .iter()
        .map(|x| r * dr * x.max(0.0) - big_r * d_big * (-x).max(0.0))
        .collect();
    let v = MeanSe::of(&values);
    let m = MeanSe::of(&rates);
    Ok((
        v.mean,
        RateEstimate {
            value: m.mean,
            std_error: m.se,
            method: Method::DriverExpectation,
            instant: Instant::Time(t),
            epsilons: Vec::new(),
            extrapolation: None,
            n_samples: m.n,
            hit_probability: None,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_rate_nonnegative_claim() {
        let rho = 0.02;
        let f = DeterministicFn::Constant(rho);
        let x = [1.0, 2.0, 3.0, 0.5];
        let (v, r) = ambiguous_rate_value_and_rate(&f, &f, &x, 0.25, 1.0).unwrap();
        let disc = (-rho * 0.75f64).exp();
        assert!((v - disc * 1.625).abs() < 1e-14);
        assert!((r.value - rho * disc * 1.625).abs() < 1e-14);
    }

    #[test]
    fn degenerate_inputs_give_zero() {
        let (lo, hi) = (DeterministicFn::Constant(0.01), DeterministicFn::Constant(0.03));
        let (_, r) = ambiguous_rate_value_and_rate(&lo, &hi, &[0.0; 5], 0.0, 1.0).unwrap();
        assert_eq!(r.value, 0.0);
        let zero = DeterministicFn::Constant(0.0);
        let (_, r) = ambiguous_rate_value_and_rate(&zero, &zero, &[1.0, -2.0], 0.0, 1.0).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn short_position_pays_borrowing_rate() {
        let (lo, hi) = (DeterministicFn::Constant(0.01), DeterministicFn::Constant(0.03));
        let (v, r) = ambiguous_rate_value_and_rate(&lo, &hi, &[-1.0], 1.0, 1.0).unwrap();
        assert_eq!(v, -1.0);
        assert!((r.value + 0.03).abs() < 1e-15);
    }

    #[test]
    fn rejects_inverted_rates() {
        let (lo, hi) = (DeterministicFn::Constant(0.05), DeterministicFn::Constant(0.03));
        assert!(ambiguous_rate_value_and_rate(&lo, &hi, &[1.0], 0.0, 1.0).is_err());
    }
}
