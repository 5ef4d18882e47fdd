use proptest::prelude::*;
use risk_closed_forms::{
    bs_put_price, entropic_value, es_rate, es_value, var_rate, var_value, vasicek_rate_t, BsPutSpec,
    GaussianClaimSpec, VasicekBondSpec,
};

proptest! {
    #[test]
    fn put_price_bounds(s in 1.0f64..3000.0, k in 1.0f64..3000.0, sigma in 0.01f64..1.0, t in 0.0f64..1.0) {
        let spec = BsPutSpec { s0: 1000.0, strike: k, mu: 0.1, sigma, horizon: 1.0 };
        let p = bs_put_price(&spec, t, s).unwrap();
        prop_assert!(p >= (k - s).max(0.0) - 1e-9 * k);
        prop_assert!(p <= k * (1.0 + 1e-12));
    }

    #[test]
    fn var_rate_sign(alpha in 0.001f64..0.999, sigma in 0.1f64..3.0, t in 0.0f64..0.99) {
        let spec = GaussianClaimSpec::constant(0.0, 0.0, sigma, 1.0);
        let r = var_rate(&spec, t, alpha).unwrap();
        prop_assert_eq!(r.signum(), if alpha < 0.5 { -1.0 } else { 1.0 });
        prop_assert!(es_rate(&spec, t, alpha).unwrap() < 0.0);
    }

    #[test]
    fn es_dominates_var(alpha in 0.001f64..0.5, w in -3.0f64..3.0, t in 0.0f64..1.0) {
        let spec = GaussianClaimSpec::constant(1.0, 0.2, 0.7, 1.0);
        prop_assert!(es_value(&spec, t, alpha, w).unwrap() >= var_value(&spec, t, alpha, w).unwrap());
    }

    #[test]
    fn entropic_monotone_in_gamma(xs in prop::collection::vec(-5.0f64..5.0, 2..50), g in 0.01f64..3.0, dg in 0.0f64..2.0) {
        let lo = entropic_value(g, &xs).unwrap();
        let hi = entropic_value(g + dg, &xs).unwrap();
        prop_assert!(hi >= lo - 1e-12 * (1.0 + lo.abs()));
    }

    #[test]
    fn vasicek_rate_finite(a in 0.05f64..10.0, b in -0.02f64..0.1, t in 0.0f64..1.0) {
        let spec = VasicekBondSpec { r0: 0.02, a, b, sigma: 0.01, horizon: 1.0 };
        prop_assert!(vasicek_rate_t(&spec, t).unwrap().is_finite());
    }
}
