//! The hold-rule constraint node.

use rand::Rng;

use crate::graph::{Role, SatisfactionTable};
use crate::rng::SimRng;

/// The register holding each slot's previous output symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StochasticNodeState {
    pub held: [usize; 3],
}

impl StochasticNodeState {
    pub fn new(held: [usize; 3]) -> Self {
        Self { held }
    }

    /// Independent uniform initial symbols, one per slot alphabet.
    pub fn uniform(table: &SatisfactionTable, rng: &mut SimRng) -> Self {
        let held = Role::ALL.map(|r| rng.random_range(0..table.alphabet(r).size()));
        Self { held }
    }
}

/// One time-step of the output on `out_role`, given input symbols `a` and `b`
/// on the other two roles (in A, B, C order).
///
/// If the inputs are consistent with some satisfying triple, the node emits
/// the implied symbol and remembers it; otherwise it repeats its last output.
pub fn node_step(
    table: &SatisfactionTable,
    out_role: Role,
    a: usize,
    b: usize,
    state: &mut StochasticNodeState,
) -> usize {
    let slot = &mut state.held[out_role.index()];
    if let Some(c) = table.image(out_role, a, b) {
        *slot = c;
    }
    *slot
}
