//! Packetized supernodes: tabulate an incoming stream for `l` steps, then
//! regenerate an uncorrelated outgoing stream from the estimated mass.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::mass::Mass;
use crate::rng::substream;

use super::source::{Histogram, StreamSource};

/// How a supernode turns packet counts into a mass estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum UpdateMode {
    /// Each estimate uses only the latest packet.
    Replacement,
    /// Each estimate uses every packet so far, which amounts to relaxation
    /// with `β = 1/m` after `m` packets.
    #[default]
    Accumulation,
}

impl UpdateMode {
    pub fn name(self) -> &'static str {
        match self {
            UpdateMode::Replacement => "replacement",
            UpdateMode::Accumulation => "accumulation",
        }
    }
}

impl fmt::Display for UpdateMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for UpdateMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "replacement" => Ok(UpdateMode::Replacement),
            "accumulation" => Ok(UpdateMode::Accumulation),
            _ => Err(Error::ConfigInvalid(format!(
                "unknown update mode {s}; expected replacement or accumulation"
            ))),
        }
    }
}

/// One supernode port: an estimator of the incoming stream plus the source
/// driving the outgoing stream.
///
/// Used alone it is a cycle-breaking buffer on an edge: the outgoing stream
/// carries the estimated incoming mass. Inside a supernode constraint the
/// outgoing mass is instead computed from the other ports and installed
/// with [`Supernode::regenerate`].
#[derive(Debug, Clone)]
pub struct Supernode {
    mode: UpdateMode,
    l: u64,
    packet: Histogram,
    accumulated: Histogram,
    current: Mass,
    m: u64,
    source: StreamSource,
    stream_seed: u64,
}

impl Supernode {
    /// A port with a uniform initial estimate. Outgoing streams for packet
    /// `p` are drawn from the substream `(stream_seed, p)`.
    pub fn new(mode: UpdateMode, l: u64, size: usize, stream_seed: u64) -> Result<Self> {
        if l == 0 {
            return Err(Error::ConfigInvalid(
                "packet length must be positive".into(),
            ));
        }
        let current = Mass::uniform(size);
        Ok(Self {
            mode,
            l,
            packet: Histogram::new(size),
            accumulated: Histogram::new(size),
            source: StreamSource::new(current.clone(), substream(stream_seed, &[0])),
            current,
            m: 0,
            stream_seed,
        })
    }

    pub fn mode(&self) -> UpdateMode {
        self.mode
    }

    pub fn packet_length(&self) -> u64 {
        self.l
    }

    pub fn packet_histogram(&self) -> &Histogram {
        &self.packet
    }

    pub fn accumulated_histogram(&self) -> &Histogram {
        &self.accumulated
    }

    /// Current estimate of the incoming mass.
    pub fn current_mass(&self) -> &Mass {
        &self.current
    }

    /// Completed packets so far.
    pub fn packets(&self) -> u64 {
        self.m
    }

    pub fn source(&self) -> &StreamSource {
        &self.source
    }

    #[inline]
    pub fn record(&mut self, symbol: usize) {
        self.packet.record(symbol);
    }

    #[inline]
    pub fn emit(&mut self) -> usize {
        self.source.step()
    }

    /// Adds a whole packet of counts at once.
    pub fn record_packet(&mut self, counts: &Histogram) {
        self.packet.add(counts);
    }

    /// Frequency estimate from the pending packet alone.
    pub fn raw_estimate(&self) -> Result<Mass> {
        self.packet.to_mass()
    }

    /// Re-seeds the outgoing stream onto `mass` for the current packet.
    pub fn regenerate(&mut self, mass: Mass) {
        self.source = StreamSource::new(mass, substream(self.stream_seed, &[self.m]));
    }

    /// Closes the pending packet: updates the estimate and regenerates the
    /// outgoing stream from it.
    pub fn packet_update(&mut self) -> Result<()> {
        if self.packet.total() != self.l {
            return Err(Error::IncompletePacket {
                expected: self.l,
                got: self.packet.total(),
            });
        }
        self.m += 1;
        self.current = match self.mode {
            UpdateMode::Replacement => self.packet.to_mass()?,
            UpdateMode::Accumulation => {
                self.accumulated.add(&self.packet);
                self.accumulated.to_mass()?
            }
        };
        self.packet.clear();
        self.regenerate(self.current.clone());
        Ok(())
    }
}

/// Closes the pending packet of `s`.
pub fn supernode_packet_update(s: &mut Supernode) -> Result<()> {
    s.packet_update()
}

/// Outgoing masses of an equality supernode: for each port, the product of
/// the channel mass and every other port's estimate, normalized and clamped.
pub fn equality_supernode_update(estimates: &[Mass], channel: &Mass) -> Result<Vec<Mass>> {
    let size = channel.len();
    if let Some(bad) = estimates.iter().find(|m| m.len() != size) {
        return Err(Error::MassLength {
            expected: size,
            got: bad.len(),
        });
    }
    (0..estimates.len())
        .map(|dest| {
            let mut w = channel.values().to_vec();
            for (_, est) in estimates.iter().enumerate().filter(|&(i, _)| i != dest) {
                w.iter_mut().zip(est.values()).for_each(|(x, p)| *x *= p);
            }
            Mass::new(w)
        })
        .collect()
}
