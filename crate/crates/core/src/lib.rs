pub mod channel;
pub mod codes;
pub mod error;
pub mod graph;
pub mod harness;
pub mod mass;
pub mod reference;
pub mod rng;
pub mod stochastic;

pub use error::{Error, Result};
