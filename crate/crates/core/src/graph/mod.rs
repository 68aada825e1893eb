//! Constraint graphs: variables, degree-3 constraint nodes and the edges
//! joining them.
//!
//! The graph follows the normal-graph convention. Every variable owns exactly
//! one edge. An observable variable's edge runs from the variable itself to
//! one constraint slot; an internal variable's edge joins two constraint
//! slots directly. Each edge carries two directed messages: index `2e` flows
//! from the edge's first end to its second, `2e + 1` the other way.
//!
//! A constraint slot whose alphabet has a single symbol may be left
//! unconnected ("grounded"); its incoming message is the point mass on that
//! symbol. This is how degree-2 constraints and fixed trellis end states are
//! expressed.

mod table;
pub mod text;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

pub use table::{validate_table, Branch, SatisfactionTable, TrellisSection};
pub use text::{parse_graph, write_graph};

use crate::error::{Error, Result};

/// A dense symbol range `0..size`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet(usize);

impl Alphabet {
    pub const BINARY: Alphabet = Alphabet(2);
    pub const SINGLETON: Alphabet = Alphabet(1);

    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptyAlphabet(size));
        }
        Ok(Self(size))
    }

    pub fn size(self) -> usize {
        self.0
    }

    pub fn contains(self, symbol: usize) -> bool {
        symbol < self.0
    }

    pub(crate) fn check(self, symbol: usize) -> Result<()> {
        if self.contains(symbol) {
            Ok(())
        } else {
            Err(Error::SymbolOutOfRange {
                symbol,
                size: self.0,
            })
        }
    }
}

/// The three edge roles of a constraint node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    A,
    B,
    C,
}

impl Role {
    pub const ALL: [Role; 3] = [Role::A, Role::B, Role::C];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Role {
        Role::ALL[i]
    }

    /// The two remaining roles, in A, B, C order.
    pub fn others(self) -> (Role, Role) {
        match self {
            Role::A => (Role::B, Role::C),
            Role::B => (Role::A, Role::C),
            Role::C => (Role::A, Role::B),
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Role::A => "A",
            Role::B => "B",
            Role::C => "C",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VariableRole {
    Info,
    Parity,
    Internal,
}

impl VariableRole {
    pub fn observable(self) -> bool {
        !matches!(self, VariableRole::Internal)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableNode {
    pub name: String,
    pub alphabet: Alphabet,
    pub role: VariableRole,
}

impl VariableNode {
    pub fn observable(&self) -> bool {
        self.role.observable()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintNode {
    pub name: String,
    pub table: Arc<SatisfactionTable>,
    /// Packetized node that works on estimated masses instead of the hold rule.
    pub supernode: bool,
}

/// One slot of one constraint node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlotRef {
    pub constraint: usize,
    pub role: Role,
}

impl SlotRef {
    pub fn new(constraint: usize, role: Role) -> Self {
        Self { constraint, role }
    }
}

/// The far end of an edge: another constraint slot, or the edge's own
/// observable variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeEnd {
    Slot(SlotRef),
    Variable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub variable: usize,
    pub first: SlotRef,
    pub second: EdgeEnd,
}

impl Edge {
    /// Directed message index leaving `slot` along this edge.
    pub fn outgoing_from(&self, index: usize, slot: SlotRef) -> usize {
        if self.first == slot {
            2 * index
        } else {
            2 * index + 1
        }
    }

    /// Directed message index arriving at `slot` along this edge.
    pub fn incoming_to(&self, index: usize, slot: SlotRef) -> usize {
        self.outgoing_from(index, slot) ^ 1
    }
}

/// Incrementally assembles a [`ConstraintGraph`].
#[derive(Debug, Default)]
pub struct GraphBuilder {
    variables: Vec<VariableNode>,
    constraints: Vec<ConstraintNode>,
    edges: Vec<Edge>,
    supernode_edges: BTreeSet<usize>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn variable(
        &mut self,
        name: impl Into<String>,
        alphabet: Alphabet,
        role: VariableRole,
    ) -> usize {
        self.variables.push(VariableNode {
            name: name.into(),
            alphabet,
            role,
        });
        self.variables.len() - 1
    }

    pub fn constraint(&mut self, name: impl Into<String>, table: Arc<SatisfactionTable>) -> usize {
        self.push_constraint(name.into(), table, false)
    }

    pub fn supernode(&mut self, name: impl Into<String>, table: Arc<SatisfactionTable>) -> usize {
        self.push_constraint(name.into(), table, true)
    }

    fn push_constraint(
        &mut self,
        name: String,
        table: Arc<SatisfactionTable>,
        supernode: bool,
    ) -> usize {
        self.constraints.push(ConstraintNode {
            name,
            table,
            supernode,
        });
        self.constraints.len() - 1
    }

    /// Attaches an observable variable to a constraint slot.
    pub fn observe(&mut self, variable: usize, slot: SlotRef) -> usize {
        self.push_edge(Edge {
            variable,
            first: slot,
            second: EdgeEnd::Variable,
        })
    }

    /// Joins two constraint slots through an internal variable.
    pub fn join(&mut self, variable: usize, first: SlotRef, second: SlotRef) -> usize {
        self.push_edge(Edge {
            variable,
            first,
            second: EdgeEnd::Slot(second),
        })
    }

    fn push_edge(&mut self, edge: Edge) -> usize {
        self.edges.push(edge);
        self.edges.len() - 1
    }

    /// Marks an edge for supernode interruption.
    pub fn flag_supernode_edge(&mut self, edge: usize) {
        self.supernode_edges.insert(edge);
    }

    pub fn build(self) -> Result<ConstraintGraph> {
        ConstraintGraph::from_parts(
            self.variables,
            self.constraints,
            self.edges,
            self.supernode_edges,
        )
    }
}

/// An immutable, validated constraint graph.
#[derive(Debug, Clone)]
pub struct ConstraintGraph {
    variables: Vec<VariableNode>,
    constraints: Vec<ConstraintNode>,
    edges: Vec<Edge>,
    supernode_edges: BTreeSet<usize>,
    slot_edges: Vec<[Option<usize>; 3]>,
    variable_edge: Vec<usize>,
    diameter: usize,
}

impl ConstraintGraph {
    fn from_parts(
        variables: Vec<VariableNode>,
        constraints: Vec<ConstraintNode>,
        edges: Vec<Edge>,
        mut supernode_edges: BTreeSet<usize>,
    ) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidGraph(msg));

        let mut slot_edges = vec![[None; 3]; constraints.len()];
        let mut variable_edge = vec![None; variables.len()];

        for (e, edge) in edges.iter().enumerate() {
            let Some(var) = variables.get(edge.variable) else {
                return invalid(format!("edge {e} names unknown variable {}", edge.variable));
            };
            if variable_edge[edge.variable].replace(e).is_some() {
                return invalid(format!("variable {} has more than one edge", var.name));
            }
            let mut ends = vec![edge.first];
            match edge.second {
                EdgeEnd::Slot(s) => {
                    if var.observable() {
                        return invalid(format!(
                            "observable variable {} must attach to exactly one slot",
                            var.name
                        ));
                    }
                    ends.push(s);
                }
                EdgeEnd::Variable => {
                    if !var.observable() {
                        return invalid(format!(
                            "internal variable {} must join two constraint slots",
                            var.name
                        ));
                    }
                }
            }
            for slot in ends {
                let Some(node) = constraints.get(slot.constraint) else {
                    return invalid(format!(
                        "edge {e} names unknown constraint {}",
                        slot.constraint
                    ));
                };
                if node.table.alphabet(slot.role) != var.alphabet {
                    return invalid(format!(
                        "edge {e}: slot {}.{} alphabet {} differs from variable {} alphabet {}",
                        node.name,
                        slot.role,
                        node.table.alphabet(slot.role).size(),
                        var.name,
                        var.alphabet.size()
                    ));
                }
                let cell = &mut slot_edges[slot.constraint][slot.role.index()];
                if cell.replace(e).is_some() {
                    return invalid(format!(
                        "slot {}.{} has more than one edge",
                        node.name, slot.role
                    ));
                }
            }
        }

        for (v, e) in variable_edge.iter().enumerate() {
            if e.is_none() {
                return invalid(format!("variable {} has no edge", variables[v].name));
            }
        }
        for (c, slots) in slot_edges.iter().enumerate() {
            for role in Role::ALL {
                let node = &constraints[c];
                if slots[role.index()].is_none() && node.table.alphabet(role).size() != 1 {
                    return invalid(format!(
                        "slot {}.{} is unconnected and its alphabet is not a singleton",
                        node.name, role
                    ));
                }
            }
        }
        if let Some(&e) = supernode_edges.iter().find(|&&e| e >= edges.len()) {
            return invalid(format!("supernode edge {e} does not exist"));
        }
        // A supernode constraint interrupts every edge it touches.
        for (c, node) in constraints.iter().enumerate() {
            if node.supernode {
                supernode_edges.extend(slot_edges[c].iter().flatten());
            }
        }

        let variable_edge = variable_edge.into_iter().map(Option::unwrap).collect();
        let mut graph = Self {
            variables,
            constraints,
            edges,
            supernode_edges,
            slot_edges,
            variable_edge,
            diameter: 0,
        };

        if !graph.supernode_edges.is_empty() && !graph.has_cycle() {
            return invalid("acyclic graph carries supernode edges".into());
        }
        graph.diameter = graph.compute_diameter();
        Ok(graph)
    }

    pub fn variables(&self) -> &[VariableNode] {
        &self.variables
    }

    pub fn constraints(&self) -> &[ConstraintNode] {
        &self.constraints
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn supernode_edges(&self) -> &BTreeSet<usize> {
        &self.supernode_edges
    }

    pub fn is_supernode_edge(&self, edge: usize) -> bool {
        self.supernode_edges.contains(&edge)
    }

    /// Edge attached to each slot of a constraint (`None` for grounded slots).
    pub fn slot_edges(&self, constraint: usize) -> [Option<usize>; 3] {
        self.slot_edges[constraint]
    }

    pub fn variable_edge(&self, variable: usize) -> usize {
        self.variable_edge[variable]
    }

    /// Observable variables in declaration order.
    pub fn observables(&self) -> Vec<usize> {
        (0..self.variables.len())
            .filter(|&v| self.variables[v].observable())
            .collect()
    }

    /// Number of flooding iterations after which evidence from every
    /// observable variable has reached every other one: the largest number of
    /// constraint nodes on a shortest path between two constraint nodes.
    pub fn diameter(&self) -> usize {
        self.diameter
    }

    pub fn is_acyclic(&self) -> bool {
        !self.has_cycle()
    }

    fn has_cycle(&self) -> bool {
        find_cycle(self, |_| true).is_some()
    }

    /// Constraint-to-constraint adjacency over internal edges.
    fn neighbours(&self, skip: impl Fn(usize) -> bool) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.constraints.len()];
        for (e, edge) in self.edges.iter().enumerate() {
            if let EdgeEnd::Slot(s) = edge.second {
                if skip(e) {
                    continue;
                }
                adj[edge.first.constraint].push((s.constraint, e));
                adj[s.constraint].push((edge.first.constraint, e));
            }
        }
        adj
    }

    fn compute_diameter(&self) -> usize {
        let adj = self.neighbours(|_| false);
        let n = self.constraints.len();
        let mut best = 0;
        let mut dist = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for start in 0..n {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[start] = 0;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                best = best.max(dist[u] + 1);
                for &(v, _) in &adj[u] {
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
        }
        best
    }
}

/// Returns the cycles not interrupted by a supernode edge.
///
/// The result is empty iff every cycle of the graph contains at least one
/// supernode edge; otherwise it holds one uncovered cycle as a sequence of
/// edge indices.
pub fn detect_cycles(graph: &ConstraintGraph) -> Vec<Vec<usize>> {
    find_cycle(graph, |e| !graph.is_supernode_edge(e))
        .into_iter()
        .collect()
}

/// Finds one cycle among the internal edges accepted by `keep`.
fn find_cycle(graph: &ConstraintGraph, keep: impl Fn(usize) -> bool) -> Option<Vec<usize>> {
    let n = graph.constraints.len();
    let adj = graph.neighbours(|e| !keep(e));
    // Spanning forest by BFS; the first non-tree edge closes a cycle.
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut used_edge = vec![false; graph.edges.len()];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &(v, e) in &adj[u] {
                if used_edge[e] {
                    continue;
                }
                used_edge[e] = true;
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some((u, e));
                    queue.push_back(v);
                } else {
                    return Some(close_cycle(&parent, u, v, e));
                }
            }
        }
    }
    None
}

fn close_cycle(
    parent: &[Option<(usize, usize)>],
    u: usize,
    v: usize,
    closing: usize,
) -> Vec<usize> {
    let path_to_root = |mut x: usize| {
        let mut nodes = vec![x];
        let mut edges = Vec::new();
        while let Some((p, e)) = parent[x] {
            edges.push(e);
            nodes.push(p);
            x = p;
        }
        (nodes, edges)
    };
    let (nu, eu) = path_to_root(u);
    let (nv, ev) = path_to_root(v);
    // Trim the common ancestry.
    let (mut i, mut j) = (nu.len(), nv.len());
    while i > 1 && j > 1 && nu[i - 2] == nv[j - 2] {
        i -= 1;
        j -= 1;
    }
    let mut cycle: Vec<usize> = eu[..i - 1].to_vec();
    cycle.reverse();
    cycle.push(closing);
    cycle.extend_from_slice(&ev[..j - 1]);
    cycle.reverse();
    cycle
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bit() -> Alphabet {
        Alphabet::BINARY
    }

    /// Two equality nodes joined by two parallel internal edges.
    fn two_node_cycle(supernode: bool) -> ConstraintGraph {
        let eq = Arc::new(SatisfactionTable::equality(2).unwrap());
        let mut g = GraphBuilder::new();
        let c0 = g.constraint("c0", eq.clone());
        let c1 = g.constraint("c1", eq);
        let x0 = g.variable("x0", bit(), VariableRole::Info);
        let x1 = g.variable("x1", bit(), VariableRole::Info);
        let u = g.variable("u", bit(), VariableRole::Internal);
        let w = g.variable("w", bit(), VariableRole::Internal);
        g.observe(x0, SlotRef::new(c0, Role::B));
        g.observe(x1, SlotRef::new(c1, Role::B));
        let e = g.join(u, SlotRef::new(c0, Role::A), SlotRef::new(c1, Role::A));
        g.join(w, SlotRef::new(c0, Role::C), SlotRef::new(c1, Role::C));
        if supernode {
            g.flag_supernode_edge(e);
        }
        g.build().unwrap()
    }

    #[test]
    fn uncovered_cycle_is_reported() {
        let g = two_node_cycle(false);
        let cycles = detect_cycles(&g);
        assert_eq!(cycles.len(), 1);
        let mut c = cycles[0].clone();
        c.sort();
        assert_eq!(c, vec![2, 3]);
        assert!(!g.is_acyclic());
    }

    #[test]
    fn supernode_edge_covers_cycle() {
        let g = two_node_cycle(true);
        assert!(detect_cycles(&g).is_empty());
    }

    #[test]
    fn four_edge_ring_cycle_is_returned_in_order() {
        let eq = Arc::new(SatisfactionTable::equality(2).unwrap());
        let mut g = GraphBuilder::new();
        let cs: Vec<usize> = (0..4)
            .map(|i| g.constraint(format!("c{i}"), eq.clone()))
            .collect();
        for (i, &c) in cs.iter().enumerate() {
            let x = g.variable(format!("x{i}"), bit(), VariableRole::Info);
            g.observe(x, SlotRef::new(c, Role::B));
        }
        for i in 0..4 {
            let v = g.variable(format!("s{i}"), bit(), VariableRole::Internal);
            g.join(
                v,
                SlotRef::new(cs[i], Role::C),
                SlotRef::new(cs[(i + 1) % 4], Role::A),
            );
        }
        let g = g.build().unwrap();
        let cycle = &detect_cycles(&g)[0];
        assert_eq!(cycle.len(), 4);
        // Consecutive edges share a constraint node.
        for k in 0..4 {
            let ends = |e: usize| {
                let edge = g.edges()[e];
                let EdgeEnd::Slot(s) = edge.second else {
                    panic!()
                };
                [edge.first.constraint, s.constraint]
            };
            let (a, b) = (ends(cycle[k]), ends(cycle[(k + 1) % 4]));
            assert!(a.iter().any(|x| b.contains(x)));
        }
    }

    #[test]
    fn chain_is_acyclic_with_diameter() {
        let eq = Arc::new(SatisfactionTable::equality(2).unwrap());
        let mut g = GraphBuilder::new();
        let c0 = g.constraint("c0", eq.clone());
        let c1 = g.constraint("c1", eq);
        for (i, (c, r)) in [(c0, Role::A), (c0, Role::B), (c1, Role::B), (c1, Role::C)]
            .into_iter()
            .enumerate()
        {
            let x = g.variable(format!("x{i}"), bit(), VariableRole::Info);
            g.observe(x, SlotRef::new(c, r));
        }
        let s = g.variable("s", bit(), VariableRole::Internal);
        g.join(s, SlotRef::new(c0, Role::C), SlotRef::new(c1, Role::A));
        let g = g.build().unwrap();
        assert!(detect_cycles(&g).is_empty());
        assert_eq!(g.diameter(), 2);
        assert_eq!(g.observables().len(), 4);
    }

    #[test]
    fn structural_violations() {
        let eq = Arc::new(SatisfactionTable::equality(2).unwrap());
        // Unconnected non-singleton slot.
        let mut g = GraphBuilder::new();
        let c = g.constraint("c", eq.clone());
        let x = g.variable("x", bit(), VariableRole::Info);
        g.observe(x, SlotRef::new(c, Role::A));
        assert!(matches!(g.build(), Err(Error::InvalidGraph(_))));

        // Alphabet mismatch.
        let mut g = GraphBuilder::new();
        let c = g.constraint("c", eq.clone());
        let x = g.variable("x", Alphabet::new(3).unwrap(), VariableRole::Info);
        g.observe(x, SlotRef::new(c, Role::A));
        assert!(matches!(g.build(), Err(Error::InvalidGraph(_))));

        // Observable variable with a two-slot edge.
        let mut g = GraphBuilder::new();
        let c0 = g.constraint("c0", eq.clone());
        let c1 = g.constraint("c1", eq.clone());
        let x = g.variable("x", bit(), VariableRole::Parity);
        g.join(x, SlotRef::new(c0, Role::A), SlotRef::new(c1, Role::A));
        assert!(matches!(g.build(), Err(Error::InvalidGraph(_))));

        // Supernode edge on an acyclic graph.
        let mut g = GraphBuilder::new();
        let c = g.constraint("c", eq);
        for r in Role::ALL {
            let x = g.variable(format!("x{r}"), bit(), VariableRole::Info);
            let e = g.observe(x, SlotRef::new(c, r));
            g.flag_supernode_edge(e);
        }
        assert!(matches!(g.build(), Err(Error::InvalidGraph(_))));
    }

    #[test]
    fn grounded_singleton_slot() {
        let one = Alphabet::SINGLETON;
        let t = Arc::new(
            SatisfactionTable::new([one, bit(), bit()], vec![[0, 0, 0], [0, 1, 1]]).unwrap(),
        );
        let mut g = GraphBuilder::new();
        let c = g.constraint("c", t);
        let x = g.variable("x", bit(), VariableRole::Info);
        let y = g.variable("y", bit(), VariableRole::Parity);
        g.observe(x, SlotRef::new(c, Role::B));
        g.observe(y, SlotRef::new(c, Role::C));
        let g = g.build().unwrap();
        assert_eq!(g.slot_edges(0), [None, Some(0), Some(1)]);
        assert_eq!(g.diameter(), 1);
    }
}
