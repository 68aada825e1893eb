//! Syndrome trellis of a binary linear code, and the chain-shaped constraint
//! graph for the (16, 11) extended Hamming code built from it.

use std::collections::BTreeSet;
use std::sync::Arc;

use super::LinearCode;
use crate::graph::{
    Alphabet, ConstraintGraph, GraphBuilder, Role, SatisfactionTable, SlotRef, VariableRole,
};

/// One trellis section per code bit.
///
/// The state before bit `i` is the partial syndrome of bits `0..i`. States are
/// expurgated to those reachable from zero and able to return to zero, then
/// renumbered densely per depth. Section `i` has roles (left state, bit,
/// right state); the first and last sections have singleton outer alphabets.
pub fn syndrome_trellis(code: &LinearCode) -> Vec<SatisfactionTable> {
    let n = code.n();
    let h = code.parity_check();
    let column = |j: usize| -> u64 {
        h.iter()
            .enumerate()
            .fold(0u64, |acc, (r, row)| acc | (u64::from(row[j]) << r))
    };
    let cols: Vec<u64> = (0..n).map(column).collect();

    let mut forward = vec![BTreeSet::from([0u64])];
    for &col in &cols {
        let next = forward
            .last()
            .unwrap()
            .iter()
            .flat_map(|&s| [s, s ^ col])
            .collect();
        forward.push(next);
    }
    let mut backward = vec![BTreeSet::from([0u64]); n + 1];
    for i in (0..n).rev() {
        backward[i] = forward[i]
            .iter()
            .copied()
            .filter(|&s| backward[i + 1].contains(&s) || backward[i + 1].contains(&(s ^ cols[i])))
            .collect();
    }
    let states: Vec<Vec<u64>> = (0..=n)
        .map(|i| forward[i].intersection(&backward[i]).copied().collect())
        .collect();
    let index = |depth: usize, s: u64| states[depth].binary_search(&s).ok();

    (0..n)
        .map(|i| {
            let mut rows = Vec::new();
            for (a, &s) in states[i].iter().enumerate() {
                for bit in 0..2usize {
                    let t = if bit == 1 { s ^ cols[i] } else { s };
                    if let Some(c) = index(i + 1, t) {
                        rows.push([a, bit, c]);
                    }
                }
            }
            let alph =
                |d: usize| Alphabet::new(states[d].len()).expect("trellis depth has a state");
            SatisfactionTable::new([alph(i), Alphabet::BINARY, alph(i + 1)], rows)
                .expect("syndrome trellis sections are constraint functions")
        })
        .collect()
}

/// Section tables of the (16, 11) extended Hamming syndrome trellis.
pub fn hamming_sections() -> Vec<Arc<SatisfactionTable>> {
    syndrome_trellis(&LinearCode::extended_hamming_16_11())
        .into_iter()
        .map(Arc::new)
        .collect()
}

/// Adds a chain of trellis sections joined by internal state variables.
/// Returns the constraint ids, in order; each section's bit slot is role B
/// and is left for the caller to connect.
pub(crate) fn add_trellis_chain(
    g: &mut GraphBuilder,
    prefix: &str,
    sections: &[Arc<SatisfactionTable>],
) -> Vec<usize> {
    let ids: Vec<usize> = sections
        .iter()
        .enumerate()
        .map(|(i, t)| g.constraint(format!("{prefix}t{i}"), t.clone()))
        .collect();
    for i in 1..sections.len() {
        let states = sections[i].alphabet(Role::A);
        let s = g.variable(format!("{prefix}s{i}"), states, VariableRole::Internal);
        g.join(
            s,
            SlotRef::new(ids[i - 1], Role::C),
            SlotRef::new(ids[i], Role::A),
        );
    }
    ids
}

/// Acyclic constraint graph of the (16, 11) extended Hamming code: sixteen
/// trellis sections in a chain, with bit `i` observed at section `i`.
///
/// Observable variables are declared first, in bit order, so decoder
/// evidence and decisions line up with codeword positions.
pub fn build_hamming_graph() -> ConstraintGraph {
    let sections = hamming_sections();
    let mut g = GraphBuilder::new();
    let bits: Vec<usize> = (0..sections.len())
        .map(|i| {
            let role = if i < 11 {
                VariableRole::Info
            } else {
                VariableRole::Parity
            };
            g.variable(format!("b{i}"), Alphabet::BINARY, role)
        })
        .collect();
    let ids = add_trellis_chain(&mut g, "", &sections);
    for (&b, &c) in bits.iter().zip(&ids) {
        g.observe(b, SlotRef::new(c, Role::B));
    }
    g.build().expect("Hamming trellis graph is well formed")
}
