use bsde_engine::{
    entropic_rate_brownian, rate_driver_expectation, At, EntropicBrownianDriver, Instant, LinearMarketDriver,
    SolutionSample,
};
use proptest::prelude::*;
use stochastic_core::{make_time_grid, PathMatrix};

fn sample(rho: Vec<f64>, z: Vec<f64>, n: usize, points: usize) -> SolutionSample {
    let grid = make_time_grid(1.0, points - 1).unwrap();
    SolutionSample::new(
        grid,
        PathMatrix::from_vec(n, points, rho),
        vec![PathMatrix::from_vec(n, points, z)],
        None,
        None,
    )
    .unwrap()
}

fn matrices() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (prop::collection::vec(-50.0..50.0f64, 12), prop::collection::vec(-5.0..5.0f64, 12))
}

proptest! {
    #[test]
    fn cash_shift_leaves_rate_unchanged((rho, z) in matrices(), h in -100.0..100.0f64, k in 0usize..3) {
        let sol = sample(rho, z, 3, 4);
        let d = LinearMarketDriver::new(0.1, 0.2);
        let a = rate_driver_expectation(&d, &sol, At::Index(k)).unwrap();
        let b = rate_driver_expectation(&d, &sol.shifted(h), At::Index(k)).unwrap();
        prop_assert_eq!(a.value, b.value);
        let e = EntropicBrownianDriver { gamma: 0.7 };
        let a = rate_driver_expectation(&e, &sol, At::Index(k)).unwrap();
        let b = rate_driver_expectation(&e, &sol.shifted(h), At::Index(k)).unwrap();
        prop_assert_eq!(a.value, b.value);
    }

    #[test]
    fn linear_driver_is_positively_homogeneous((rho, z) in matrices(), k in 0usize..3) {
        let sol = sample(rho, z, 3, 4);
        let d = LinearMarketDriver::new(0.1, 0.2);
        let base = rate_driver_expectation(&d, &sol, At::Index(k)).unwrap().value;
        for alpha in [0.0, 0.5, 2.0] {
            let r = rate_driver_expectation(&d, &sol.scaled(alpha), At::Index(k)).unwrap().value;
            prop_assert!((r - alpha * base).abs() <= 1e-12 * (1.0 + base.abs()));
        }
    }

    #[test]
    fn entropic_rate_linear_in_gamma(z in prop::collection::vec(-5.0..5.0f64, 1..50), gamma in 0.01..10.0f64) {
        let a = entropic_rate_brownian(gamma, &z, Instant::Time(0.0)).unwrap().value;
        let b = entropic_rate_brownian(2.0 * gamma, &z, Instant::Time(0.0)).unwrap().value;
        prop_assert!(a <= 0.0);
        prop_assert!((b - 2.0 * a).abs() <= 1e-12 * a.abs().max(1e-300));
    }
}
