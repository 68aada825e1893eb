//! Stochastic decoding: integer symbol streams passed through hold-rule
//! constraint nodes, with packetized supernodes on cycles.

mod engine;
mod latching;
mod node;
mod source;
mod supernode;

pub use engine::{
    run_stochastic, DecisionWindow, Session, StochasticConfig, StochasticDecoder, StochasticOutput,
};
pub use latching::{build_latching_demo, build_latching_demo_with_supernodes, LatchingDemo};
pub use node::{node_step, StochasticNodeState};
pub use source::{histogram_decide, source_step, weighted_decide, Histogram, StreamSource};
pub use supernode::{equality_supernode_update, supernode_packet_update, Supernode, UpdateMode};
