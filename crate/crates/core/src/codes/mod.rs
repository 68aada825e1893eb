//! The two codes used in the experiments, their encoders and graphs.

mod hamming;
mod linear;
mod product;

use std::fmt;
use std::str::FromStr;

pub use hamming::{build_hamming_graph, hamming_sections, syndrome_trellis};
pub use linear::{min_distance_asymptote, q_function, LinearCode};
pub use product::{build_product_graph, encode_product, product_info_positions, ProductCodeLayout};

use crate::error::{Error, Result};
use crate::graph::ConstraintGraph;

/// Named code selectable from the simulation harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CodeId {
    Hamming16_11,
    Product256_121,
}

impl CodeId {
    pub fn name(self) -> &'static str {
        match self {
            CodeId::Hamming16_11 => "hamming16_11",
            CodeId::Product256_121 => "product256_121",
        }
    }

    pub fn n(self) -> usize {
        match self {
            CodeId::Hamming16_11 => 16,
            CodeId::Product256_121 => 256,
        }
    }

    pub fn k(self) -> usize {
        match self {
            CodeId::Hamming16_11 => 11,
            CodeId::Product256_121 => 121,
        }
    }

    pub fn rate(self) -> f64 {
        self.k() as f64 / self.n() as f64
    }

    pub fn graph(self) -> ConstraintGraph {
        match self {
            CodeId::Hamming16_11 => build_hamming_graph(),
            CodeId::Product256_121 => build_product_graph().0,
        }
    }

    /// Encodes `k` info bits into `n` code bits, in graph observable order.
    pub fn encode(self, component: &LinearCode, info: &[u8]) -> Result<Vec<u8>> {
        match self {
            CodeId::Hamming16_11 => component.encode(info),
            CodeId::Product256_121 => encode_product(component, info),
        }
    }

    pub fn info_positions(self) -> Vec<usize> {
        match self {
            CodeId::Hamming16_11 => (0..11).collect(),
            CodeId::Product256_121 => product_info_positions(),
        }
    }
}

impl fmt::Display for CodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CodeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hamming16_11" => Ok(CodeId::Hamming16_11),
            "product256_121" => Ok(CodeId::Product256_121),
            _ => Err(Error::ConfigInvalid(format!(
                "unknown code {s}; expected hamming16_11 or product256_121"
            ))),
        }
    }
}
