//! Bit-error-rate sweeps over Eb/N0 points.
//!
//! Every frame is a pure function of `(root seed, point index, frame index)`,
//! so frames can be decoded in parallel chunks and merged in frame order:
//! the stopping point, and therefore every record, is the same for any
//! number of worker threads.

pub mod cli;
mod csv;

use std::io::Write;

use rand::Rng;
use rayon::prelude::*;

pub use csv::{
    emit_asymptote, emit_csv, parse_ebno_list, parse_ebno_range, ASYMPTOTE_HEADER, CSV_HEADER,
};

use crate::channel::{to_evidence, transmit, ChannelConfig};
use crate::codes::{CodeId, LinearCode};
use crate::error::{Error, Result};
use crate::graph::ConstraintGraph;
use crate::mass::Mass;
use crate::reference::{brute_force_map, ReferenceDecoder, UpdateRule};
use crate::rng::{derive_seed, substream, tag};
use crate::stochastic::{DecisionWindow, StochasticConfig, StochasticDecoder, UpdateMode};

pub const DEFAULT_STOP_ERRORS: u64 = 50;
pub const DEFAULT_MAX_FRAMES: u64 = 1_000_000;

/// Flooding iterations for the reference decoders on the product code.
pub const PRODUCT_REFERENCE_ITERATIONS: usize = 128;

const FIRST_CHUNK: u64 = 4;
const MAX_CHUNK: u64 = 256;

/// Decoder under test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecoderSpec {
    /// Flooding sum-product; `None` picks a per-code default.
    SumProduct {
        iterations: Option<usize>,
    },
    Relaxation {
        beta: f64,
        iterations: Option<usize>,
    },
    Stochastic(StochasticConfig),
    /// Exact bitwise MAP by codebook enumeration (small codes only).
    Map,
}

impl DecoderSpec {
    /// The stochastic decoder with the usual settings for `code`:
    /// one 250-step packet for the Hamming code, eight accumulating
    /// 250-step packets for the product code.
    pub fn stochastic_default(code: CodeId) -> Self {
        let iterations = match code {
            CodeId::Hamming16_11 => 1,
            CodeId::Product256_121 => 8,
        };
        DecoderSpec::Stochastic(
            StochasticConfig::new(250, iterations, UpdateMode::Accumulation)
                .expect("positive defaults"),
        )
    }

    pub fn name(&self) -> String {
        match self {
            DecoderSpec::SumProduct { .. } => "sum_product".into(),
            DecoderSpec::Relaxation { .. } => "relaxation".into(),
            DecoderSpec::Map => "map".into(),
            DecoderSpec::Stochastic(c) => match c.window {
                DecisionWindow::FullRun => format!("stochastic_{}", c.mode),
                DecisionWindow::LastPacket => format!("stochastic_{}_last", c.mode),
            },
        }
    }

    /// Flooding iterations or packets actually run on `code`.
    pub fn iterations(&self, code: CodeId) -> Option<usize> {
        let reference = |it: Option<usize>, relax: bool| {
            it.unwrap_or(match (code, relax) {
                (CodeId::Hamming16_11, false) => 16,
                (CodeId::Hamming16_11, true) => 128,
                (CodeId::Product256_121, _) => PRODUCT_REFERENCE_ITERATIONS,
            })
        };
        match self {
            DecoderSpec::SumProduct { iterations } => Some(reference(*iterations, false)),
            DecoderSpec::Relaxation { iterations, .. } => Some(reference(*iterations, true)),
            DecoderSpec::Stochastic(c) => Some(c.iterations),
            DecoderSpec::Map => None,
        }
    }

    pub fn packet_length(&self) -> Option<usize> {
        match self {
            DecoderSpec::Stochastic(c) => Some(c.l),
            _ => None,
        }
    }

    pub fn beta(&self) -> Option<f64> {
        match self {
            DecoderSpec::Relaxation { beta, .. } => Some(*beta),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub code: CodeId,
    pub decoder: DecoderSpec,
    pub ebn0_points: Vec<f64>,
    pub stop_errors: u64,
    pub max_frames: u64,
    pub root_seed: u64,
    /// Worker threads; 0 uses the ambient rayon pool.
    pub threads: usize,
}

impl SweepConfig {
    pub fn new(code: CodeId, decoder: DecoderSpec, ebn0_points: Vec<f64>, root_seed: u64) -> Self {
        Self {
            code,
            decoder,
            ebn0_points,
            stop_errors: DEFAULT_STOP_ERRORS,
            max_frames: DEFAULT_MAX_FRAMES,
            root_seed,
            threads: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::ConfigInvalid(m));
        if self.ebn0_points.is_empty() {
            return bad("no Eb/N0 points given".into());
        }
        if let Some(p) = self.ebn0_points.iter().find(|p| !p.is_finite()) {
            return bad(format!("Eb/N0 point {p} is not finite"));
        }
        if self.stop_errors == 0 || self.max_frames == 0 {
            return bad("stop-errors and max-frames must be positive".into());
        }
        match self.decoder {
            DecoderSpec::Relaxation { beta, .. } if !(beta > 0.0 && beta < 1.0) => {
                Err(Error::BetaOutOfRange(beta))
            }
            DecoderSpec::Stochastic(c) => {
                StochasticConfig::new(c.l, c.iterations, c.mode).map(|_| ())
            }
            DecoderSpec::SumProduct {
                iterations: Some(0),
            }
            | DecoderSpec::Relaxation {
                iterations: Some(0),
                ..
            } => bad("reference decoders need at least one iteration".into()),
            _ => Ok(()),
        }
    }
}

/// One BER data point. Errors are counted on information bits only.
#[derive(Debug, Clone, PartialEq)]
pub struct BerRecord {
    pub code: CodeId,
    pub decoder: String,
    pub ebn0_db: f64,
    pub frames: u64,
    pub bit_errors: u64,
    /// `bit_errors / (frames * k)`.
    pub ber: f64,
    pub l: Option<usize>,
    pub iterations: Option<usize>,
    pub beta: Option<f64>,
    pub seed: u64,
}

/// A transmitted frame and what the receiver sees.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub info: Vec<u8>,
    pub codeword: Vec<u8>,
    pub evidence: Vec<Mass>,
    /// Seed for the decoder's own randomness.
    pub decoder_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameOutcome {
    pub decisions: Vec<usize>,
    pub bit_errors: u64,
}

#[derive(Debug)]
enum Engine {
    Reference { rule: UpdateRule, iterations: usize },
    Stochastic(StochasticDecoder),
    Map(Vec<Vec<u8>>),
}

/// Everything needed to simulate frames for one configuration.
#[derive(Debug)]
pub struct Simulator {
    code: CodeId,
    component: LinearCode,
    graph: ConstraintGraph,
    info_positions: Vec<usize>,
    engine: Engine,
    root_seed: u64,
}

impl Simulator {
    pub fn new(cfg: &SweepConfig) -> Result<Self> {
        cfg.validate()?;
        let component = LinearCode::extended_hamming_16_11();
        let graph = cfg.code.graph();
        let engine = match cfg.decoder {
            DecoderSpec::SumProduct { .. } => Engine::Reference {
                rule: UpdateRule::SumProduct,
                iterations: cfg
                    .decoder
                    .iterations(cfg.code)
                    .expect("reference iterations"),
            },
            DecoderSpec::Relaxation { beta, .. } => Engine::Reference {
                rule: UpdateRule::Relaxation { beta },
                iterations: cfg
                    .decoder
                    .iterations(cfg.code)
                    .expect("reference iterations"),
            },
            DecoderSpec::Stochastic(c) => Engine::Stochastic(StochasticDecoder::new(&graph, c)?),
            DecoderSpec::Map => match cfg.code {
                CodeId::Hamming16_11 => Engine::Map(component.codebook()?),
                CodeId::Product256_121 => return Err(Error::CodebookTooLarge(cfg.code.k())),
            },
        };
        Ok(Self {
            code: cfg.code,
            info_positions: cfg.code.info_positions(),
            component,
            graph,
            engine,
            root_seed: cfg.root_seed,
        })
    }

    /// Frame `frame` of point `point`: random info bits, encoded and sent
    /// over the channel at `ebn0_db`.
    pub fn frame(&self, point: usize, frame: u64, ebn0_db: f64) -> Result<Frame> {
        let seed = derive_seed(self.root_seed, &[tag::FRAME, point as u64, frame]);
        let mut rng = substream(seed, &[tag::INFO]);
        let info: Vec<u8> = (0..self.code.k())
            .map(|_| rng.random_range(0..2u8))
            .collect();
        let codeword = self.code.encode(&self.component, &info)?;
        let channel = ChannelConfig::new(ebn0_db, self.code.rate())?;
        let evidence = transmit(&codeword, &channel, seed)
            .into_iter()
            .map(|y| to_evidence(y, &channel))
            .collect();
        Ok(Frame {
            info,
            codeword,
            evidence,
            decoder_seed: derive_seed(seed, &[tag::DECODER]),
        })
    }

    pub fn decode(&self, frame: &Frame) -> Result<FrameOutcome> {
        let decisions = match &self.engine {
            Engine::Reference { rule, iterations } => {
                ReferenceDecoder::new(&self.graph)
                    .rule(*rule)
                    .iterations(*iterations)
                    .decode(&frame.evidence)?
                    .decisions
            }
            Engine::Stochastic(dec) => dec.decode(&frame.evidence, frame.decoder_seed)?.decisions,
            Engine::Map(book) => brute_force_map(book, &frame.evidence)?
                .iter()
                .map(Mass::argmax)
                .collect(),
        };
        Ok(self.outcome(frame, decisions))
    }

    fn outcome(&self, frame: &Frame, decisions: Vec<usize>) -> FrameOutcome {
        let bit_errors = self
            .info_positions
            .iter()
            .filter(|&&p| decisions[p] != usize::from(frame.codeword[p]))
            .count() as u64;
        FrameOutcome {
            decisions,
            bit_errors,
        }
    }

    /// Decodes one frame with the stochastic engine, writing its trace.
    pub fn decode_traced(&self, frame: &Frame, out: &mut dyn Write) -> Result<FrameOutcome> {
        let Engine::Stochastic(dec) = &self.engine else {
            return Err(Error::ConfigInvalid(
                "tracing requires the stochastic decoder".into(),
            ));
        };
        let edges: Vec<usize> = (0..dec.directed_edges()).collect();
        let decisions = dec
            .decode_traced(&frame.evidence, frame.decoder_seed, &edges, out)?
            .decisions;
        Ok(self.outcome(frame, decisions))
    }
}

/// Simulates one Eb/N0 point until the error or frame budget runs out.
pub fn run_point(sim: &Simulator, cfg: &SweepConfig, point: usize) -> Result<BerRecord> {
    let ebn0 = cfg.ebn0_points[point];
    let (mut frames, mut errors) = (0u64, 0u64);
    let mut chunk = FIRST_CHUNK;
    'outer: while frames < cfg.max_frames {
        let end = (frames + chunk).min(cfg.max_frames);
        let outcomes: Vec<u64> = (frames..end)
            .into_par_iter()
            .map(|f| Ok(sim.decode(&sim.frame(point, f, ebn0)?)?.bit_errors))
            .collect::<Result<_>>()?;
        for e in outcomes {
            frames += 1;
            errors += e;
            if errors >= cfg.stop_errors {
                break 'outer;
            }
        }
        chunk = (chunk * 2).min(MAX_CHUNK);
    }
    Ok(BerRecord {
        code: cfg.code,
        decoder: cfg.decoder.name(),
        ebn0_db: ebn0,
        frames,
        bit_errors: errors,
        ber: errors as f64 / (frames * cfg.code.k() as u64) as f64,
        l: cfg.decoder.packet_length(),
        iterations: cfg.decoder.iterations(cfg.code),
        beta: cfg.decoder.beta(),
        seed: cfg.root_seed,
    })
}

/// Runs every point of the sweep, in order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<BerRecord>> {
    let sim = Simulator::new(cfg)?;
    let go = || {
        (0..cfg.ebn0_points.len())
            .map(|p| run_point(&sim, cfg, p))
            .collect()
    };
    if cfg.threads == 0 {
        go()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(|e| Error::ConfigInvalid(format!("thread pool: {e}")))?
            .install(go)
    }
}
