//! A small cyclic graph that demonstrates latching.

use std::sync::Arc;

use crate::graph::{
    Alphabet, ConstraintGraph, GraphBuilder, Role, SatisfactionTable, SlotRef, VariableRole,
};

/// The demo graph and the directed edges that make up its cycles.
#[derive(Debug, Clone)]
pub struct LatchingDemo {
    pub graph: ConstraintGraph,
    /// Directed edges between constraint nodes.
    pub internal: Vec<usize>,
    /// Held symbol to install on each internal directed edge.
    pub initial: Vec<usize>,
}

/// Three equality nodes and two parity checks, each check joined to every
/// equality node, with one channel observation per equality node.
///
/// In the all-zero internal state every check sees zeros and emits zero,
/// while each equality node either agrees with zero or holds zero, so no
/// channel input can move the cycle.
pub fn build_latching_demo() -> LatchingDemo {
    build(false)
}

/// The same graph with supernode buffers on the two edges from the first
/// check to the first two equality nodes; this breaks every cycle.
pub fn build_latching_demo_with_supernodes() -> LatchingDemo {
    build(true)
}

fn build(supernodes: bool) -> LatchingDemo {
    let eq = Arc::new(SatisfactionTable::equality(2).expect("binary equality"));
    let parity = Arc::new(SatisfactionTable::parity());
    let mut g = GraphBuilder::new();
    let bits: Vec<usize> = (0..3)
        .map(|i| g.variable(format!("x{i}"), Alphabet::BINARY, VariableRole::Info))
        .collect();
    let eqs: Vec<usize> = (0..3)
        .map(|i| g.constraint(format!("eq{i}"), eq.clone()))
        .collect();
    let checks: Vec<usize> = (0..2)
        .map(|j| g.constraint(format!("p{j}"), parity.clone()))
        .collect();
    for i in 0..3 {
        g.observe(bits[i], SlotRef::new(eqs[i], Role::B));
    }
    let mut internal_edges = Vec::new();
    for (j, &p) in checks.iter().enumerate() {
        let eq_role = if j == 0 { Role::A } else { Role::C };
        for (i, &e) in eqs.iter().enumerate() {
            let v = g.variable(
                format!("m{j}_{i}"),
                Alphabet::BINARY,
                VariableRole::Internal,
            );
            let edge = g.join(
                v,
                SlotRef::new(e, eq_role),
                SlotRef::new(p, Role::from_index(i)),
            );
            if supernodes && j == 0 && i < 2 {
                g.flag_supernode_edge(edge);
            }
            internal_edges.push(edge);
        }
    }
    let graph = g.build().expect("latching demo graph is well formed");
    let internal: Vec<usize> = internal_edges
        .iter()
        .flat_map(|&e| [2 * e, 2 * e + 1])
        .collect();
    let initial = vec![0; internal.len()];
    LatchingDemo {
        graph,
        internal,
        initial,
    }
}
