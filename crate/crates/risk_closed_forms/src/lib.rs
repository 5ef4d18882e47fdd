//! Exact risk evaluations and rates used as ground truth for the Monte
//! Carlo engine: Gaussian VaR/ES, Black–Scholes put, Vasicek bond,
//! entropic risk and the exponential payoff.

mod entropic;
mod error;
mod exp_payoff;
mod gaussian;
pub mod normal;
mod put;
pub mod quadrature;
mod vasicek;

pub use entropic::{entropic_value, entropic_value_conditional};
pub use error::ClosedFormError;
pub use exp_payoff::{
    exp_payoff_rate, exp_payoff_rate_replicating, exp_payoff_value, exp_payoff_z, exp_payoff_z_scaled,
    ExpPayoffSpec,
};
pub use gaussian::{es_rate, es_value, var_rate, var_value, DeterministicFn, GaussianClaimSpec};
pub use put::{black_put, bs_put_mean_price, bs_put_price, bs_put_rate_t, bs_put_z, BsPutSpec};
pub use vasicek::{vasicek_bond_price, vasicek_rate_t, VasicekBondSpec};

pub type Result<T> = std::result::Result<T, ClosedFormError>;

/// Poisson probabilities `P(N = n)`, `n = 0..=n_max`, for mean `m`.
pub fn poisson_weights(m: f64, n_max: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(n_max + 1);
    let mut p = (-m).exp();
    for n in 0..=n_max {
        w.push(p);
        p *= m / (n + 1) as f64;
    }
    w
}
