//! Whole-graph stochastic decoding.
//!
//! A graph is compiled once into flat arrays: every directed edge owns one
//! symbol cell, each hold-rule output is a lookup into a dense image table,
//! and every random stream is keyed by `(seed, kind, node, slot, ...)`.
//! Time-steps are double-buffered, so results do not depend on the order in
//! which nodes are visited.
//!
//! Hold-rule registers start from a random draw and supernodes from uniform
//! estimates. A cell only becomes a message once it is written from inputs
//! that are messages themselves (a supernode output once every estimate it
//! uses has closed a packet), and observable histograms skip arrivals that
//! are still start-up values. Supernode estimation records every symbol.

use std::io::Write;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{detect_cycles, ConstraintGraph, EdgeEnd, Role, SatisfactionTable, SlotRef};
use crate::mass::Mass;
use crate::reference::sum_product_update;
use crate::rng::{derive_seed, substream, tag};

use super::source::{weighted_decide, Histogram, StreamSource};
use super::supernode::{Supernode, UpdateMode};

const NO_IMAGE: u16 = u16::MAX;

/// Which time-steps feed the decision histograms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DecisionWindow {
    /// Every step of the run.
    #[default]
    FullRun,
    /// Only the final packet.
    LastPacket,
}

impl DecisionWindow {
    pub fn name(self) -> &'static str {
        match self {
            DecisionWindow::FullRun => "full",
            DecisionWindow::LastPacket => "last",
        }
    }
}

impl std::str::FromStr for DecisionWindow {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(DecisionWindow::FullRun),
            "last" => Ok(DecisionWindow::LastPacket),
            _ => Err(Error::ConfigInvalid(format!(
                "unknown decision window {s}; expected full or last"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StochasticConfig {
    /// Packet length in time-steps.
    pub l: usize,
    /// Packets per decode; the run lasts `l * iterations` steps.
    pub iterations: usize,
    pub mode: UpdateMode,
    pub window: DecisionWindow,
}

impl StochasticConfig {
    pub fn new(l: usize, iterations: usize, mode: UpdateMode) -> Result<Self> {
        if l == 0 || iterations == 0 {
            return Err(Error::ConfigInvalid(format!(
                "packet length and iterations must be positive, got l={l}, iterations={iterations}"
            )));
        }
        Ok(Self {
            l,
            iterations,
            mode,
            window: DecisionWindow::FullRun,
        })
    }

    pub fn with_window(mut self, window: DecisionWindow) -> Self {
        self.window = window;
        self
    }

    pub fn total_steps(&self) -> usize {
        self.l * self.iterations
    }
}

/// Decisions and the histograms of the streams arriving at each observable
/// variable, in declaration order. A decision maximizes the
/// evidence-weighted count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StochasticOutput {
    pub decisions: Vec<usize>,
    pub histograms: Vec<Histogram>,
}

#[derive(Debug, Clone, Copy)]
struct HoldOp {
    out: u32,
    in1: u32,
    in2: u32,
    lut: u32,
    stride: u32,
}

#[derive(Debug, Clone, Copy)]
enum PortPlan {
    Grounded,
    /// Faces an observable variable; the estimate is the channel evidence.
    Channel {
        observable: usize,
        write: u32,
    },
    Edge {
        read: u32,
        write: u32,
        size: usize,
    },
}

#[derive(Debug, Clone)]
struct SuperPlan {
    constraint: usize,
    table: Arc<SatisfactionTable>,
    ports: [PortPlan; 3],
}

/// Stand-alone buffer on one direction of a flagged edge.
#[derive(Debug, Clone, Copy)]
struct BufferPlan {
    directed: usize,
    read: u32,
    write: u32,
    size: usize,
}

#[derive(Debug, Clone, Copy)]
struct ObservablePlan {
    variable: usize,
    size: usize,
    channel: u32,
    incoming: u32,
}

/// A graph compiled for stochastic decoding.
#[derive(Debug, Clone)]
pub struct StochasticDecoder {
    config: StochasticConfig,
    cells: usize,
    ops: Vec<HoldOp>,
    /// `(constraint, role, alphabet size)` of each op, for the initial draws.
    op_keys: Vec<(usize, Role, usize)>,
    lut: Vec<u16>,
    supers: Vec<SuperPlan>,
    buffers: Vec<BufferPlan>,
    observables: Vec<ObservablePlan>,
    write_cell: Vec<u32>,
    read_cell: Vec<u32>,
}

impl StochasticDecoder {
    /// Compiles `graph`, refusing graphs with a cycle not broken by a supernode.
    pub fn new(graph: &ConstraintGraph, config: StochasticConfig) -> Result<Self> {
        if let Some(cycle) = detect_cycles(graph).into_iter().next() {
            return Err(Error::UncoveredCycle(cycle));
        }
        Self::compile(graph, config)
    }

    /// Compiles `graph` without the cycle check, for studying latching.
    #[doc(hidden)]
    pub fn new_allowing_cycles(graph: &ConstraintGraph, config: StochasticConfig) -> Result<Self> {
        Self::compile(graph, config)
    }

    fn compile(graph: &ConstraintGraph, config: StochasticConfig) -> Result<Self> {
        StochasticConfig::new(config.l, config.iterations, config.mode)?;
        if let Some(v) = graph
            .variables()
            .iter()
            .find(|v| v.alphabet.size() >= NO_IMAGE as usize)
        {
            return Err(Error::InvalidGraph(format!(
                "alphabet of {} has {} symbols, more than the engine supports",
                v.name,
                v.alphabet.size()
            )));
        }
        let edges = graph.edges();
        let constraints = graph.constraints();
        let size_of = |e: usize| graph.variables()[edges[e].variable].alphabet.size();
        let is_super =
            |end: EdgeEnd| matches!(end, EdgeEnd::Slot(s) if constraints[s.constraint].supernode);

        let directed = 2 * edges.len();
        let write_cell: Vec<u32> = (0..directed as u32).collect();
        let mut read_cell = write_cell.clone();
        let mut cells = directed;
        let mut buffers = Vec::new();
        for (e, edge) in edges.iter().enumerate() {
            let standalone = graph.is_supernode_edge(e)
                && matches!(edge.second, EdgeEnd::Slot(_))
                && !is_super(EdgeEnd::Slot(edge.first))
                && !is_super(edge.second);
            if standalone {
                for d in [2 * e, 2 * e + 1] {
                    read_cell[d] = cells as u32;
                    buffers.push(BufferPlan {
                        directed: d,
                        read: d as u32,
                        write: cells as u32,
                        size: size_of(e),
                    });
                    cells += 1;
                }
            }
        }
        let zero = cells as u32;
        cells += 1;

        let mut ops = Vec::new();
        let mut op_keys = Vec::new();
        let mut lut = Vec::new();
        let mut lut_index: Vec<(*const SatisfactionTable, Role, u32)> = Vec::new();
        let mut supers = Vec::new();
        let observable_index = |v: usize| graph.observables().iter().position(|&o| o == v);

        for (c, node) in constraints.iter().enumerate() {
            let slots = graph.slot_edges(c);
            let incoming = |role: Role| match slots[role.index()] {
                Some(e) => read_cell[edges[e].incoming_to(e, SlotRef::new(c, role))],
                None => zero,
            };
            if node.supernode {
                let ports = Role::ALL.map(|role| match slots[role.index()] {
                    None => PortPlan::Grounded,
                    Some(e) => {
                        let write = write_cell[edges[e].outgoing_from(e, SlotRef::new(c, role))];
                        match edges[e].second {
                            EdgeEnd::Variable => PortPlan::Channel {
                                observable: observable_index(edges[e].variable)
                                    .expect("observable edge"),
                                write,
                            },
                            EdgeEnd::Slot(_) => PortPlan::Edge {
                                read: incoming(role),
                                write,
                                size: size_of(e),
                            },
                        }
                    }
                });
                supers.push(SuperPlan {
                    constraint: c,
                    table: node.table.clone(),
                    ports,
                });
                continue;
            }
            for role in Role::ALL {
                let Some(e) = slots[role.index()] else {
                    continue;
                };
                let (x, y) = role.others();
                let key = Arc::as_ptr(&node.table);
                let offset = match lut_index.iter().find(|(t, r, _)| *t == key && *r == role) {
                    Some(&(_, _, off)) => off,
                    None => {
                        let off = lut.len() as u32;
                        lut.extend(
                            node.table
                                .image_table(role)
                                .into_iter()
                                .map(|s| s.map_or(NO_IMAGE, |s| s as u16)),
                        );
                        lut_index.push((key, role, off));
                        off
                    }
                };
                ops.push(HoldOp {
                    out: write_cell[edges[e].outgoing_from(e, SlotRef::new(c, role))],
                    in1: incoming(x),
                    in2: incoming(y),
                    lut: offset,
                    stride: node.table.alphabet(y).size() as u32,
                });
                op_keys.push((c, role, node.table.alphabet(role).size()));
            }
        }

        let observables = graph
            .observables()
            .into_iter()
            .map(|v| {
                let e = graph.variable_edge(v);
                ObservablePlan {
                    variable: v,
                    size: size_of(e),
                    channel: write_cell[2 * e + 1],
                    incoming: read_cell[2 * e],
                }
            })
            .collect();

        Ok(Self {
            config,
            cells,
            ops,
            op_keys,
            lut,
            supers,
            buffers,
            observables,
            write_cell,
            read_cell,
        })
    }

    pub fn config(&self) -> StochasticConfig {
        self.config
    }

    /// Number of directed edges (`2e` runs first-to-second end, `2e + 1` back).
    pub fn directed_edges(&self) -> usize {
        self.write_cell.len()
    }

    /// Starts a decode of one frame. `evidence` holds one mass per
    /// observable variable, in declaration order.
    pub fn session(&self, evidence: &[Mass], seed: u64) -> Result<Session<'_>> {
        Session::new(self, evidence, seed)
    }

    /// Runs the full `l * iterations` steps and returns the decisions.
    pub fn decode(&self, evidence: &[Mass], seed: u64) -> Result<StochasticOutput> {
        let mut s = self.session(evidence, seed)?;
        s.run(self.config.total_steps());
        s.finish()
    }

    /// Like [`decode`](Self::decode), also writing `edge,t,symbol` lines for
    /// every directed edge in `trace` after each step.
    pub fn decode_traced(
        &self,
        evidence: &[Mass],
        seed: u64,
        trace: &[usize],
        out: &mut dyn Write,
    ) -> Result<StochasticOutput> {
        let mut s = self.session(evidence, seed)?;
        writeln!(out, "edge,t,symbol")?;
        for _ in 0..self.config.total_steps() {
            s.step();
            for &d in trace {
                writeln!(out, "{d},{},{}", s.time(), s.sent_symbol(d))?;
            }
        }
        s.finish()
    }
}

#[derive(Debug, Clone)]
enum PortState {
    Grounded,
    Channel(StreamSource),
    Edge(Supernode),
}

/// Mutable state of one decode in progress.
#[derive(Debug, Clone)]
pub struct Session<'d> {
    dec: &'d StochasticDecoder,
    seed: u64,
    t: usize,
    cur: Vec<u16>,
    nxt: Vec<u16>,
    /// Whether each cell holds a computed message rather than its initial draw.
    cur_valid: Vec<bool>,
    nxt_valid: Vec<bool>,
    evidence: Vec<Mass>,
    channels: Vec<StreamSource>,
    supers: Vec<[PortState; 3]>,
    /// Whether each supernode port's output is built from informed estimates.
    super_valid: Vec<[bool; 3]>,
    buffers: Vec<Supernode>,
    histograms: Vec<Histogram>,
}

impl<'d> Session<'d> {
    fn new(dec: &'d StochasticDecoder, evidence: &[Mass], seed: u64) -> Result<Self> {
        if evidence.len() != dec.observables.len() {
            return Err(Error::LengthMismatch {
                expected: dec.observables.len(),
                got: evidence.len(),
            });
        }
        for (o, m) in dec.observables.iter().zip(evidence) {
            if m.len() != o.size {
                return Err(Error::MassLength {
                    expected: o.size,
                    got: m.len(),
                });
            }
        }
        let mode = dec.config.mode;
        let l = dec.config.l as u64;
        let mut cur = vec![0u16; dec.cells];
        let mut valid = vec![true; dec.cells];

        for (op, &(c, role, size)) in dec.ops.iter().zip(&dec.op_keys) {
            let mut rng = substream(seed, &[tag::HELD, c as u64, role.index() as u64]);
            cur[op.out as usize] = rng.random_range(0..size) as u16;
            valid[op.out as usize] = false;
        }

        let mut channels = Vec::with_capacity(evidence.len());
        for (o, m) in dec.observables.iter().zip(evidence) {
            let mut src = StreamSource::new(
                m.clone(),
                substream(seed, &[tag::VARIABLE, o.variable as u64]),
            );
            cur[o.channel as usize] = src.step() as u16;
            channels.push(src);
        }

        let mut supers = Vec::with_capacity(dec.supers.len());
        for plan in &dec.supers {
            let ports = Role::ALL.map(|role| {
                let key = derive_seed(
                    seed,
                    &[tag::SUPERNODE, plan.constraint as u64, role.index() as u64],
                );
                match plan.ports[role.index()] {
                    PortPlan::Grounded => Ok(PortState::Grounded),
                    PortPlan::Channel { .. } => Ok(PortState::Channel(StreamSource::new(
                        Mass::uniform(1),
                        substream(key, &[0]),
                    ))),
                    PortPlan::Edge { size, .. } => {
                        Supernode::new(mode, l, size, key).map(PortState::Edge)
                    }
                }
            });
            let [a, b, c] = ports;
            supers.push([a?, b?, c?]);
        }

        let mut buffers = Vec::with_capacity(dec.buffers.len());
        for b in &dec.buffers {
            let key = derive_seed(seed, &[tag::REGEN, b.directed as u64]);
            buffers.push(Supernode::new(mode, l, b.size, key)?);
        }

        let mut s = Self {
            dec,
            seed,
            t: 0,
            nxt: cur.clone(),
            cur,
            nxt_valid: valid.clone(),
            cur_valid: valid,
            evidence: evidence.to_vec(),
            channels,
            super_valid: vec![[false; 3]; supers.len()],
            supers,
            buffers,
            histograms: dec
                .observables
                .iter()
                .map(|o| Histogram::new(o.size))
                .collect(),
        };
        s.regenerate_supers()?;
        s.prime_outputs();
        s.nxt.copy_from_slice(&s.cur);
        Ok(s)
    }

    /// Recomputes every supernode constraint's outgoing masses from its
    /// current estimates and restarts the outgoing streams.
    fn regenerate_supers(&mut self) -> Result<()> {
        let packet = (self.t / self.dec.config.l) as u64;
        for ((plan, ports), valid) in self
            .dec
            .supers
            .iter()
            .zip(&mut self.supers)
            .zip(&mut self.super_valid)
        {
            let informed = Role::ALL.map(|role| match &ports[role.index()] {
                PortState::Edge(sn) => sn.packets() > 0,
                _ => true,
            });
            *valid = Role::ALL.map(|role| {
                let (x, y) = role.others();
                informed[x.index()] && informed[y.index()]
            });
            let estimates =
                Role::ALL.map(
                    |role| match (&plan.ports[role.index()], &ports[role.index()]) {
                        (PortPlan::Channel { observable, .. }, _) => {
                            self.evidence[*observable].clone()
                        }
                        (_, PortState::Edge(sn)) => sn.current_mass().clone(),
                        _ => Mass::uniform(1),
                    },
                );
            for role in Role::ALL {
                let (x, y) = role.others();
                let out = || {
                    sum_product_update(
                        &plan.table,
                        role,
                        &estimates[x.index()],
                        &estimates[y.index()],
                    )
                };
                match &mut ports[role.index()] {
                    PortState::Grounded => {}
                    PortState::Channel(src) => {
                        let key = derive_seed(
                            self.seed,
                            &[tag::SUPERNODE, plan.constraint as u64, role.index() as u64],
                        );
                        *src = StreamSource::new(out()?, substream(key, &[packet]));
                    }
                    PortState::Edge(sn) => sn.regenerate(out()?),
                }
            }
        }
        Ok(())
    }

    /// Fills every supernode output cell with a first draw from its stream.
    fn prime_outputs(&mut self) {
        emit_supers(
            self.dec,
            &mut self.supers,
            &self.super_valid,
            &mut self.buffers,
            &mut self.cur,
            &mut self.cur_valid,
        );
    }

    /// Time-steps taken so far.
    pub fn time(&self) -> usize {
        self.t
    }

    /// Symbol most recently emitted onto directed edge `d`.
    pub fn sent_symbol(&self, d: usize) -> usize {
        self.cur[self.dec.write_cell[d] as usize] as usize
    }

    /// Symbol most recently delivered along directed edge `d`; differs from
    /// the sent symbol only across a supernode buffer.
    pub fn received_symbol(&self, d: usize) -> usize {
        self.cur[self.dec.read_cell[d] as usize] as usize
    }

    /// Overwrites the held symbol on directed edge `d`, on both sides of
    /// any buffer. The forced symbol counts as a message from then on.
    pub fn set_symbol(&mut self, d: usize, symbol: usize) {
        for cell in [self.dec.write_cell[d], self.dec.read_cell[d]] {
            self.cur[cell as usize] = symbol as u16;
            self.cur_valid[cell as usize] = true;
        }
    }

    pub fn histograms(&self) -> &[Histogram] {
        &self.histograms
    }

    /// One synchronous time-step; supernodes close their packets every `l` steps.
    pub fn step(&mut self) {
        let dec = self.dec;
        let (cur, nxt) = (&self.cur, &mut self.nxt);
        let (cv, nv) = (&self.cur_valid, &mut self.nxt_valid);
        for op in &dec.ops {
            let (i1, i2, out) = (op.in1 as usize, op.in2 as usize, op.out as usize);
            let v = dec.lut[(op.lut + cur[i1] as u32 * op.stride + cur[i2] as u32) as usize];
            if v == NO_IMAGE {
                nxt[out] = cur[out];
                nv[out] = cv[out];
            } else {
                nxt[out] = v;
                nv[out] = cv[i1] && cv[i2];
            }
        }
        for (o, src) in dec.observables.iter().zip(&mut self.channels) {
            nxt[o.channel as usize] = src.step() as u16;
        }
        emit_supers(
            dec,
            &mut self.supers,
            &self.super_valid,
            &mut self.buffers,
            nxt,
            nv,
        );
        std::mem::swap(&mut self.cur, &mut self.nxt);
        std::mem::swap(&mut self.cur_valid, &mut self.nxt_valid);
        self.t += 1;

        let cur = &self.cur;
        for (plan, ports) in dec.supers.iter().zip(&mut self.supers) {
            for (pp, ps) in plan.ports.iter().zip(ports.iter_mut()) {
                if let (PortPlan::Edge { read, .. }, PortState::Edge(sn)) = (pp, ps) {
                    sn.record(cur[*read as usize] as usize);
                }
            }
        }
        for (plan, sn) in dec.buffers.iter().zip(&mut self.buffers) {
            sn.record(cur[plan.read as usize] as usize);
        }
        for (o, h) in dec.observables.iter().zip(&mut self.histograms) {
            if self.cur_valid[o.incoming as usize] {
                h.record(cur[o.incoming as usize] as usize);
            }
        }

        if self.t.is_multiple_of(dec.config.l) {
            self.close_packets()
                .expect("packets hold exactly l symbols at a boundary");
            if dec.config.window == DecisionWindow::LastPacket && self.t < dec.config.total_steps()
            {
                self.histograms.iter_mut().for_each(Histogram::clear);
            }
        }
    }

    fn close_packets(&mut self) -> Result<()> {
        for ports in &mut self.supers {
            for port in ports.iter_mut() {
                if let PortState::Edge(sn) = port {
                    sn.packet_update()?;
                }
            }
        }
        for sn in &mut self.buffers {
            sn.packet_update()?;
        }
        self.regenerate_supers()
    }

    pub fn run(&mut self, steps: usize) {
        for _ in 0..steps {
            self.step();
        }
    }

    pub fn finish(self) -> Result<StochasticOutput> {
        let decisions = self
            .histograms
            .iter()
            .zip(&self.evidence)
            .map(|(h, ev)| weighted_decide(h, ev))
            .collect::<Result<_>>()?;
        Ok(StochasticOutput {
            decisions,
            histograms: self.histograms,
        })
    }
}

/// Draws the next output of every supernode port and buffer into `cells`.
/// A buffer's output is a message once its first packet has closed.
fn emit_supers(
    dec: &StochasticDecoder,
    supers: &mut [[PortState; 3]],
    super_valid: &[[bool; 3]],
    buffers: &mut [Supernode],
    cells: &mut [u16],
    valid: &mut [bool],
) {
    for ((plan, ports), ok) in dec.supers.iter().zip(supers).zip(super_valid) {
        for ((pp, ps), &ok) in plan.ports.iter().zip(ports.iter_mut()).zip(ok) {
            let (write, symbol) = match (pp, ps) {
                (PortPlan::Channel { write, .. }, PortState::Channel(src)) => (*write, src.step()),
                (PortPlan::Edge { write, .. }, PortState::Edge(sn)) => (*write, sn.emit()),
                _ => continue,
            };
            cells[write as usize] = symbol as u16;
            valid[write as usize] = ok;
        }
    }
    for (plan, sn) in dec.buffers.iter().zip(buffers) {
        cells[plan.write as usize] = sn.emit() as u16;
        valid[plan.write as usize] = sn.packets() > 0;
    }
}

/// Compiles `graph` and decodes one frame.
pub fn run_stochastic(
    graph: &ConstraintGraph,
    evidence: &[Mass],
    l: usize,
    iterations: usize,
    mode: UpdateMode,
    seed: u64,
) -> Result<StochasticOutput> {
    let config = StochasticConfig::new(l, iterations, mode)?;
    StochasticDecoder::new(graph, config)?.decode(evidence, seed)
}
