//! Line-oriented text format for constraint graphs.
//!
//! ```text
//! # comments run to end of line
//! alphabet bit 2
//! table eq bit bit bit
//! row 0 0 0
//! row 1 1 1
//! constraint c0 eq            # append `supernode` for a packetized node
//! variable x0 bit info        # info | parity | internal
//! edge x0 c0.B                # observable: one slot
//! edge s1 c0.C c1.A           # internal: two slots
//! supernode-edge s1
//! ```
//!
//! `row` lines belong to the most recent `table`. Names are declared before
//! use. [`write_graph`] emits a file that [`parse_graph`] reads back into an
//! identical graph.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use super::{
    Alphabet, ConstraintGraph, EdgeEnd, GraphBuilder, Role, SatisfactionTable, SlotRef,
    VariableRole,
};
use crate::error::{Error, Result};

struct PendingTable {
    name: String,
    alphabets: [Alphabet; 3],
    rows: Vec<[usize; 3]>,
    line: usize,
}

#[derive(Default)]
struct Parser {
    alphabets: HashMap<String, Alphabet>,
    tables: HashMap<String, Arc<SatisfactionTable>>,
    constraints: HashMap<String, usize>,
    variables: HashMap<String, usize>,
    edges: HashMap<usize, usize>,
    pending: Option<PendingTable>,
    builder: GraphBuilder,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

impl Parser {
    fn finish_table(&mut self) -> Result<()> {
        if let Some(t) = self.pending.take() {
            let table = SatisfactionTable::new(t.alphabets, t.rows)
                .map_err(|e| parse_err(t.line, format!("table {}: {e}", t.name)))?;
            self.tables.insert(t.name, Arc::new(table));
        }
        Ok(())
    }

    fn fresh(&self, line: usize, name: &str) -> Result<()> {
        let taken = self.alphabets.contains_key(name)
            || self.tables.contains_key(name)
            || self.constraints.contains_key(name)
            || self.variables.contains_key(name)
            || self.pending.as_ref().is_some_and(|t| t.name == name);
        if taken {
            Err(parse_err(line, format!("name {name} declared twice")))
        } else {
            Ok(())
        }
    }

    fn alphabet(&self, line: usize, name: &str) -> Result<Alphabet> {
        self.alphabets
            .get(name)
            .copied()
            .ok_or_else(|| parse_err(line, format!("unknown alphabet {name}")))
    }

    fn slot(&self, line: usize, token: &str) -> Result<SlotRef> {
        let (node, role) = token.rsplit_once('.').ok_or_else(|| {
            parse_err(line, format!("expected <constraint>.<A|B|C>, got {token}"))
        })?;
        let role = match role {
            "A" => Role::A,
            "B" => Role::B,
            "C" => Role::C,
            _ => return Err(parse_err(line, format!("unknown role {role}"))),
        };
        let constraint = *self
            .constraints
            .get(node)
            .ok_or_else(|| parse_err(line, format!("unknown constraint {node}")))?;
        Ok(SlotRef { constraint, role })
    }

    fn line(&mut self, line: usize, words: &[&str]) -> Result<()> {
        let number = |w: &str| {
            w.parse::<usize>()
                .map_err(|_| parse_err(line, format!("expected a non-negative integer, got {w}")))
        };
        if words[0] != "row" {
            self.finish_table()?;
        }
        match words {
            ["alphabet", name, size] => {
                self.fresh(line, name)?;
                let a = Alphabet::new(number(size)?).map_err(|e| parse_err(line, e.to_string()))?;
                self.alphabets.insert(name.to_string(), a);
            }
            ["table", name, a, b, c] => {
                self.fresh(line, name)?;
                self.pending = Some(PendingTable {
                    name: name.to_string(),
                    alphabets: [
                        self.alphabet(line, a)?,
                        self.alphabet(line, b)?,
                        self.alphabet(line, c)?,
                    ],
                    rows: Vec::new(),
                    line,
                });
            }
            ["row", a, b, c] => {
                let row = [number(a)?, number(b)?, number(c)?];
                let t = self
                    .pending
                    .as_mut()
                    .ok_or_else(|| parse_err(line, "row outside a table"))?;
                for (s, alph) in row.iter().zip(t.alphabets) {
                    alph.check(*s).map_err(|e| parse_err(line, e.to_string()))?;
                }
                t.rows.push(row);
            }
            ["constraint", name, table, rest @ ..] => {
                self.fresh(line, name)?;
                let t = self
                    .tables
                    .get(*table)
                    .cloned()
                    .ok_or_else(|| parse_err(line, format!("unknown table {table}")))?;
                let id = match rest {
                    [] => self.builder.constraint(*name, t),
                    ["supernode"] => self.builder.supernode(*name, t),
                    _ => return Err(parse_err(line, "trailing tokens after constraint")),
                };
                self.constraints.insert(name.to_string(), id);
            }
            ["variable", name, alphabet, role] => {
                self.fresh(line, name)?;
                let role = match *role {
                    "info" => VariableRole::Info,
                    "parity" => VariableRole::Parity,
                    "internal" => VariableRole::Internal,
                    _ => return Err(parse_err(line, format!("unknown variable role {role}"))),
                };
                let alphabet = self.alphabet(line, alphabet)?;
                let id = self.builder.variable(*name, alphabet, role);
                self.variables.insert(name.to_string(), id);
            }
            ["edge", var, ends @ ..] => {
                let v = *self
                    .variables
                    .get(*var)
                    .ok_or_else(|| parse_err(line, format!("unknown variable {var}")))?;
                let e = match ends {
                    [s] => {
                        let s = self.slot(line, s)?;
                        self.builder.observe(v, s)
                    }
                    [s, t] => {
                        let (s, t) = (self.slot(line, s)?, self.slot(line, t)?);
                        self.builder.join(v, s, t)
                    }
                    _ => return Err(parse_err(line, "edge takes one or two slots")),
                };
                self.edges.insert(v, e);
            }
            ["supernode-edge", var] => {
                let e = self
                    .variables
                    .get(*var)
                    .and_then(|v| self.edges.get(v))
                    .copied()
                    .ok_or_else(|| parse_err(line, format!("no edge declared for {var}")))?;
                self.builder.flag_supernode_edge(e);
            }
            _ => {
                return Err(parse_err(
                    line,
                    format!("unrecognised line: {}", words.join(" ")),
                ))
            }
        }
        Ok(())
    }
}

/// Parses the text format into a validated graph.
pub fn parse_graph(src: &str) -> Result<ConstraintGraph> {
    let mut p = Parser::default();
    for (i, raw) in src.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = content.split_whitespace().collect();
        if !words.is_empty() {
            p.line(i + 1, &words)?;
        }
    }
    p.finish_table()?;
    p.builder.build()
}

/// A prefix `p` such that no graph name has the form `p<digits>`.
fn fresh_prefix(base: &str, names: &[&str]) -> String {
    let mut prefix = base.to_string();
    while names.iter().any(|n| {
        n.strip_prefix(prefix.as_str())
            .is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
    }) {
        prefix.push('_');
    }
    prefix
}

/// Serializes a graph into the text format.
pub fn write_graph(graph: &ConstraintGraph) -> String {
    let mut out = String::new();
    let names: Vec<&str> = graph
        .variables()
        .iter()
        .map(|v| v.name.as_str())
        .chain(graph.constraints().iter().map(|c| c.name.as_str()))
        .collect();
    let (ap, tp) = (fresh_prefix("a", &names), fresh_prefix("t", &names));
    let alphabet_name = |a: Alphabet| format!("{ap}{}", a.size());

    let mut sizes: Vec<usize> = graph
        .variables()
        .iter()
        .map(|v| v.alphabet.size())
        .chain(
            graph
                .constraints()
                .iter()
                .flat_map(|c| c.table.alphabets().map(Alphabet::size)),
        )
        .collect();
    sizes.sort_unstable();
    sizes.dedup();
    for s in sizes {
        writeln!(out, "alphabet {ap}{s} {s}").unwrap();
    }

    let mut tables: Vec<Arc<SatisfactionTable>> = Vec::new();
    let mut table_of = Vec::with_capacity(graph.constraints().len());
    for c in graph.constraints() {
        let idx = match tables
            .iter()
            .position(|t| Arc::ptr_eq(t, &c.table) || **t == *c.table)
        {
            Some(i) => i,
            None => {
                tables.push(c.table.clone());
                tables.len() - 1
            }
        };
        table_of.push(idx);
    }
    for (i, t) in tables.iter().enumerate() {
        let [a, b, c] = t.alphabets();
        writeln!(
            out,
            "table {tp}{i} {} {} {}",
            alphabet_name(a),
            alphabet_name(b),
            alphabet_name(c)
        )
        .unwrap();
        for r in t.rows() {
            writeln!(out, "row {} {} {}", r[0], r[1], r[2]).unwrap();
        }
    }
    for (c, node) in graph.constraints().iter().enumerate() {
        let suffix = if node.supernode { " supernode" } else { "" };
        writeln!(out, "constraint {} {tp}{}{suffix}", node.name, table_of[c]).unwrap();
    }
    for v in graph.variables() {
        let role = match v.role {
            VariableRole::Info => "info",
            VariableRole::Parity => "parity",
            VariableRole::Internal => "internal",
        };
        writeln!(
            out,
            "variable {} {} {role}",
            v.name,
            alphabet_name(v.alphabet)
        )
        .unwrap();
    }
    let slot = |s: SlotRef| format!("{}.{}", graph.constraints()[s.constraint].name, s.role);
    for edge in graph.edges() {
        let var = &graph.variables()[edge.variable].name;
        match edge.second {
            EdgeEnd::Variable => writeln!(out, "edge {var} {}", slot(edge.first)),
            EdgeEnd::Slot(s) => writeln!(out, "edge {var} {} {}", slot(edge.first), slot(s)),
        }
        .unwrap();
    }
    let implied = |e: usize| {
        let edge = graph.edges()[e];
        let mut ends = vec![edge.first];
        if let EdgeEnd::Slot(s) = edge.second {
            ends.push(s);
        }
        ends.iter()
            .any(|s| graph.constraints()[s.constraint].supernode)
    };
    for &e in graph.supernode_edges() {
        if !implied(e) {
            writeln!(
                out,
                "supernode-edge {}",
                graph.variables()[graph.edges()[e].variable].name
            )
            .unwrap();
        }
    }
    out
}
