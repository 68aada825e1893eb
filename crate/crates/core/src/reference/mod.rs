//! Exact message passing under a flooding schedule.
//!
//! Every constraint node reads the masses that arrived at the start of the
//! iteration, computes a fresh outgoing mass for each connected slot, and all
//! new masses are published together. Observable variables re-emit their
//! channel mass on every iteration. Two update rules are available: plain
//! sum-product replacement and successive relaxation.

mod map;

pub use map::brute_force_map;

use crate::error::{Error, Result};
use crate::graph::{ConstraintGraph, EdgeEnd, Role, SatisfactionTable, SlotRef};
use crate::mass::{argmax, normalize_clamp, Mass, CLAMP_EPS};

/// Floor applied by the flooding decoders by default. It only guards against
/// exact zeros, so marginals on trees match bitwise MAP to rounding error.
pub const EXACT_FLOOR: f64 = 1e-300;

/// Sum-product update for one output role, clamped with [`CLAMP_EPS`].
///
/// `in1` and `in2` are the masses on the two other roles, in A, B, C order.
pub fn sum_product_update(
    table: &SatisfactionTable,
    out_role: Role,
    in1: &Mass,
    in2: &Mass,
) -> Result<Mass> {
    let mut out = vec![0.0; table.alphabet(out_role).size()];
    sum_product_into(
        table,
        out_role,
        in1.values(),
        in2.values(),
        &mut out,
        CLAMP_EPS,
    )?;
    Mass::with_clamp(out, CLAMP_EPS)
}

/// Slice form of [`sum_product_update`], writing the normalized result into `out`.
pub fn sum_product_into(
    table: &SatisfactionTable,
    out_role: Role,
    in1: &[f64],
    in2: &[f64],
    out: &mut [f64],
    eps: f64,
) -> Result<()> {
    let (x, y) = out_role.others();
    for (m, role) in [(in1, x), (in2, y)] {
        let expected = table.alphabet(role).size();
        if m.len() != expected {
            return Err(Error::MassLength {
                expected,
                got: m.len(),
            });
        }
    }
    out.iter_mut().for_each(|v| *v = 0.0);
    let (o, xi, yi) = (out_role.index(), x.index(), y.index());
    for row in table.rows() {
        out[row[o]] += in1[row[xi]] * in2[row[yi]];
    }
    normalize_clamp(out, eps)
}

/// Relaxation: `prev + beta * (nu - prev)`.
pub fn relaxation_update(prev: &Mass, nu: &Mass, beta: f64) -> Result<Mass> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::BetaOutOfRange(beta));
    }
    if prev.len() != nu.len() {
        return Err(Error::MassLength {
            expected: prev.len(),
            got: nu.len(),
        });
    }
    let values = prev
        .values()
        .iter()
        .zip(nu.values())
        .map(|(p, n)| p + beta * (n - p))
        .collect();
    // A convex blend of two masses is already normalized.
    Mass::with_clamp(values, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UpdateRule {
    SumProduct,
    Relaxation { beta: f64 },
}

/// One mass per directed edge, stored contiguously.
#[derive(Debug, Clone, PartialEq)]
pub struct MessageState {
    offsets: Vec<usize>,
    values: Vec<f64>,
    iteration: usize,
}

impl MessageState {
    /// Uniform messages everywhere, with `evidence` (one mass per observable
    /// variable, in declaration order) on the variable-to-constraint messages.
    pub fn new(graph: &ConstraintGraph, evidence: &[Mass]) -> Result<Self> {
        let observables = graph.observables();
        if evidence.len() != observables.len() {
            return Err(Error::LengthMismatch {
                expected: observables.len(),
                got: evidence.len(),
            });
        }
        let mut offsets = Vec::with_capacity(2 * graph.edges().len() + 1);
        let mut values = Vec::new();
        for edge in graph.edges() {
            let n = graph.variables()[edge.variable].alphabet.size();
            for _ in 0..2 {
                offsets.push(values.len());
                values.extend(std::iter::repeat_n(1.0 / n as f64, n));
            }
        }
        offsets.push(values.len());
        let mut state = Self {
            offsets,
            values,
            iteration: 0,
        };
        for (&v, mass) in observables.iter().zip(evidence) {
            let e = graph.variable_edge(v);
            let slot = state.slice_mut(2 * e + 1);
            if slot.len() != mass.len() {
                return Err(Error::MassLength {
                    expected: slot.len(),
                    got: mass.len(),
                });
            }
            slot.copy_from_slice(mass.values());
        }
        Ok(state)
    }

    /// Mass on a directed edge (`2e` first-to-second, `2e + 1` reverse).
    pub fn message(&self, directed: usize) -> &[f64] {
        &self.values[self.offsets[directed]..self.offsets[directed + 1]]
    }

    fn slice_mut(&mut self, directed: usize) -> &mut [f64] {
        let (a, b) = (self.offsets[directed], self.offsets[directed + 1]);
        &mut self.values[a..b]
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }
}

const SINGLETON: [f64; 1] = [1.0];

/// Runs one flooding iteration and returns the new state.
pub fn flood_iteration(
    graph: &ConstraintGraph,
    state: &MessageState,
    rule: UpdateRule,
    clamp: f64,
) -> Result<MessageState> {
    if let UpdateRule::Relaxation { beta } = rule {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::BetaOutOfRange(beta));
        }
    }
    let mut next = state.clone();
    let mut nu = Vec::new();
    for (c, node) in graph.constraints().iter().enumerate() {
        let slots = graph.slot_edges(c);
        let incoming = |role: Role| -> &[f64] {
            match slots[role.index()] {
                Some(e) => state.message(graph.edges()[e].incoming_to(e, SlotRef::new(c, role))),
                None => &SINGLETON,
            }
        };
        for out_role in Role::ALL {
            let Some(e) = slots[out_role.index()] else {
                continue;
            };
            let (x, y) = out_role.others();
            nu.resize(node.table.alphabet(out_role).size(), 0.0);
            sum_product_into(
                &node.table,
                out_role,
                incoming(x),
                incoming(y),
                &mut nu,
                clamp,
            )?;
            let directed = graph.edges()[e].outgoing_from(e, SlotRef::new(c, out_role));
            let prev = state.message(directed);
            let dst = next.slice_mut(directed);
            match rule {
                UpdateRule::Relaxation { beta } if state.iteration > 0 => {
                    for ((d, p), n) in dst.iter_mut().zip(prev).zip(&nu) {
                        *d = p + beta * (n - p);
                    }
                }
                _ => dst.copy_from_slice(&nu),
            }
        }
    }
    next.iteration = state.iteration + 1;
    Ok(next)
}

/// Hard decisions and marginals for every observable variable.
#[derive(Debug, Clone, PartialEq)]
pub struct Decoded {
    pub decisions: Vec<usize>,
    pub marginals: Vec<Mass>,
}

/// Marginals at the observable variables: evidence times incoming message.
pub fn marginals(graph: &ConstraintGraph, state: &MessageState, clamp: f64) -> Result<Decoded> {
    let mut decisions = Vec::new();
    let mut out = Vec::new();
    for v in graph.observables() {
        let e = graph.variable_edge(v);
        debug_assert_eq!(graph.edges()[e].second, EdgeEnd::Variable);
        let weights = state
            .message(2 * e)
            .iter()
            .zip(state.message(2 * e + 1))
            .map(|(a, b)| a * b)
            .collect::<Vec<_>>();
        let m = Mass::with_clamp(weights, clamp)?;
        decisions.push(argmax(m.values()));
        out.push(m);
    }
    Ok(Decoded {
        decisions,
        marginals: out,
    })
}

/// Flooding decoder over a fixed graph.
#[derive(Debug, Clone)]
pub struct ReferenceDecoder<'g> {
    graph: &'g ConstraintGraph,
    rule: UpdateRule,
    iterations: usize,
    clamp: f64,
}

impl<'g> ReferenceDecoder<'g> {
    /// Sum-product, run for the graph's diameter, exact floor.
    pub fn new(graph: &'g ConstraintGraph) -> Self {
        Self {
            graph,
            rule: UpdateRule::SumProduct,
            iterations: graph.diameter().max(1),
            clamp: EXACT_FLOOR,
        }
    }

    pub fn rule(mut self, rule: UpdateRule) -> Self {
        self.rule = rule;
        self
    }

    pub fn iterations(mut self, iterations: usize) -> Self {
        self.iterations = iterations;
        self
    }

    pub fn clamp(mut self, eps: f64) -> Self {
        self.clamp = eps;
        self
    }

    pub fn decode(&self, evidence: &[Mass]) -> Result<Decoded> {
        if self.iterations == 0 {
            return Err(Error::ConfigInvalid("iterations must be positive".into()));
        }
        let mut state = MessageState::new(self.graph, evidence)?;
        for _ in 0..self.iterations {
            state = flood_iteration(self.graph, &state, self.rule, self.clamp)?;
        }
        marginals(self.graph, &state, self.clamp)
    }
}

/// Decodes with the given rule for `iterations` flooding iterations.
pub fn decode(
    graph: &ConstraintGraph,
    evidence: &[Mass],
    rule: UpdateRule,
    iterations: usize,
) -> Result<Decoded> {
    ReferenceDecoder::new(graph)
        .rule(rule)
        .iterations(iterations)
        .decode(evidence)
}
