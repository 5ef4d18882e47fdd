//! BSDE drivers and the two resilience-rate estimators: the finite
//! difference of the risk process and the negative driver expectation
//! ("bouncing drift"), plus conditional rates, a least-squares backward
//! solver and the model-specific rate formulas.

mod ambiguous;
mod conditional;
mod driver;
mod entropic;
mod error;
mod estimate;
mod expectation;
mod finite_difference;
mod jump_market;
mod lsmc;
pub mod regression;
mod solution;

pub use ambiguous::ambiguous_rate_value_and_rate;
pub use conditional::{rate_conditional, ConditionalRate};
pub use driver::{
    builtin_drivers, check_flags, AmbiguousRateDriver, BondDriver, Driver, DriverCatalog, DriverFlags, DriverParams,
    EntropicBrownianDriver, EntropicJumpDriver, LinearMarketDriver, LinearYDriver, PositivePartDriver, RateSource,
    ZeroDriver,
};
pub use entropic::{entropic_rate_brownian, entropic_rate_jump, EntropicJumpModel, EntropicJumpRates};
pub use error::EngineError;
pub use estimate::{At, Extrapolation, Instant, Method, RateEstimate};
pub use expectation::rate_driver_expectation;
pub use finite_difference::{default_epsilons, rate_finite_difference};
pub use jump_market::{jump_market_rate, jump_market_rate_series, JumpCallSpec};
pub use lsmc::lsmc_solve;
pub use solution::SolutionSample;

pub type Result<T> = std::result::Result<T, EngineError>;
