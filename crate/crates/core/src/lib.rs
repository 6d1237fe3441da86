pub mod baselines;
pub mod cli;
pub mod engine;
pub mod error;
pub mod metrics;
pub mod model;
pub mod reduction;
pub mod reference;
pub mod rng;
pub mod rounding;
pub mod separation;
pub mod simplex;

pub use error::{Error, Result};
