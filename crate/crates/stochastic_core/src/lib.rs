//! Simulation substrate: time grids, per-path reproducible noise, model
//! paths (GBM, Vasicek, jump GBM, arithmetic Brownian) and first-hitting
//! times read off the grid.

mod error;
mod grid;
mod hitting;
mod noise;
mod paths;
pub mod rng;
mod simulate;
pub mod stats;

pub use error::CoreError;
pub use grid::{make_time_grid, TimeGrid};
pub use hitting::{first_hitting, Direction, StoppingSample};
pub use noise::{sample_noise, NoiseBundle};
pub use paths::{ModelTag, PathMatrix, StatePaths};
pub use simulate::{simulate_arithmetic, simulate_gbm, simulate_jump_gbm, simulate_vasicek};

pub type Result<T> = std::result::Result<T, CoreError>;
