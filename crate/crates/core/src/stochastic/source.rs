//! Random symbol streams and the histograms that tabulate them.

use rand::RngCore;

use crate::error::{Error, Result};
use crate::mass::{argmax, Mass};
use crate::rng::SimRng;

/// Emits i.i.d. symbols distributed as `mass`.
///
/// Sampling compares one 32-bit draw against cumulative thresholds, so a
/// binary source costs a single comparison per step.
#[derive(Debug, Clone)]
pub struct StreamSource {
    mass: Mass,
    thresholds: Vec<u32>,
    rng: SimRng,
}

impl StreamSource {
    pub fn new(mass: Mass, rng: SimRng) -> Self {
        let scale = 4_294_967_296.0;
        let mut cum = 0.0;
        let thresholds = mass.values()[..mass.len() - 1]
            .iter()
            .map(|&p| {
                cum += p;
                (cum * scale).round().min(u32::MAX as f64) as u32
            })
            .collect();
        Self {
            mass,
            thresholds,
            rng,
        }
    }

    pub fn mass(&self) -> &Mass {
        &self.mass
    }

    #[inline]
    pub fn step(&mut self) -> usize {
        if self.thresholds.is_empty() {
            return 0;
        }
        let r = self.rng.next_u32();
        self.thresholds.iter().take_while(|&&t| t <= r).count()
    }
}

/// Draws the next symbol from `source`.
pub fn source_step(source: &mut StreamSource) -> usize {
    source.step()
}

/// Symbol counts over a finite alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    counts: Vec<u64>,
    total: u64,
}

impl Histogram {
    pub fn new(size: usize) -> Self {
        Self {
            counts: vec![0; size],
            total: 0,
        }
    }

    pub fn from_counts(counts: Vec<u64>) -> Self {
        let total = counts.iter().sum();
        Self { counts, total }
    }

    #[inline]
    pub fn record(&mut self, symbol: usize) {
        self.counts[symbol] += 1;
        self.total += 1;
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn clear(&mut self) {
        self.counts.iter_mut().for_each(|c| *c = 0);
        self.total = 0;
    }

    pub fn add(&mut self, other: &Histogram) {
        for (c, o) in self.counts.iter_mut().zip(&other.counts) {
            *c += o;
        }
        self.total += other.total;
    }

    /// Relative frequencies, clamped like any other mass.
    pub fn to_mass(&self) -> Result<Mass> {
        if self.total == 0 {
            return Err(Error::EmptyHistogram);
        }
        Mass::new(self.counts.iter().map(|&c| c as f64).collect())
    }

    pub fn decide(&self) -> Result<usize> {
        histogram_decide(self)
    }
}

/// The most frequent symbol, lowest index on ties.
pub fn histogram_decide(h: &Histogram) -> Result<usize> {
    if h.total == 0 {
        return Err(Error::EmptyHistogram);
    }
    Ok(argmax(&h.counts))
}

/// Pseudocount added to every histogram bin before weighting (Jeffreys).
pub const DECISION_PSEUDOCOUNT: f64 = 0.5;

/// The symbol maximizing `prior(s) · (count(s) + 1/2)`, lowest index on
/// ties: a hard decision on the product of stored evidence and the
/// tabulated incoming stream. The pseudocount keeps a short histogram from
/// claiming unbounded odds; an empty histogram decides on the prior alone.
pub fn weighted_decide(h: &Histogram, prior: &Mass) -> Result<usize> {
    if prior.len() != h.counts.len() {
        return Err(Error::MassLength {
            expected: h.counts.len(),
            got: prior.len(),
        });
    }
    let score: Vec<f64> = h
        .counts
        .iter()
        .zip(prior.values())
        .map(|(&c, p)| (c as f64 + DECISION_PSEUDOCOUNT) * p)
        .collect();
    Ok(argmax(&score))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mass::CLAMP_EPS;
    use crate::rng::substream;

    #[test]
    fn decide_examples() {
        let d = |c: Vec<u64>| histogram_decide(&Histogram::from_counts(c));
        assert_eq!(d(vec![10, 240]), Ok(1));
        assert_eq!(d(vec![5, 5]), Ok(0));
        assert_eq!(d(vec![0, 0, 7, 7]), Ok(2));
        assert_eq!(d(vec![0, 0]), Err(Error::EmptyHistogram));
    }

    #[test]
    fn weighted_decisions() {
        let h = Histogram::from_counts(vec![60, 40]);
        assert_eq!(weighted_decide(&h, &Mass::uniform(2)), Ok(0));
        assert_eq!(weighted_decide(&h, &Mass::binary(0.3)), Ok(1));
        assert_eq!(
            weighted_decide(&Histogram::from_counts(vec![50, 50]), &Mass::uniform(2)),
            Ok(0)
        );
        assert_eq!(
            weighted_decide(&Histogram::new(2), &Mass::binary(0.3)),
            Ok(1)
        );
        // 240 samples cannot outvote 5000:1 evidence.
        let h = Histogram::from_counts(vec![0, 240]);
        assert_eq!(
            weighted_decide(&h, &Mass::new(vec![5000.0, 1.0]).unwrap()),
            Ok(0)
        );
        assert_eq!(
            weighted_decide(&h, &Mass::new(vec![100.0, 1.0]).unwrap()),
            Ok(1)
        );
    }

    #[test]
    fn near_point_mass() {
        let mut s = StreamSource::new(Mass::binary(1.0 - CLAMP_EPS), substream(1, &[]));
        let zeros = (0..10_000).filter(|_| s.step() == 0).count();
        assert!(zeros >= 9_800);
    }

    #[test]
    fn uniform_counts_within_three_sigma() {
        let n = 1_000_000u64;
        let mut s = StreamSource::new(Mass::uniform(4), substream(2, &[]));
        let mut h = Histogram::new(4);
        for _ in 0..n {
            h.record(source_step(&mut s));
        }
        let (p, q) = (0.25, 0.75);
        let sigma = (n as f64 * p * q).sqrt();
        for &c in h.counts() {
            assert!(
                (c as f64 - n as f64 * p).abs() < 3.0 * sigma,
                "{:?}",
                h.counts()
            );
        }
        assert_eq!(h.total(), n);
    }

    #[test]
    fn same_seed_same_sequence() {
        let mass = Mass::new(vec![0.2, 0.5, 0.3]).unwrap();
        let run = || {
            let mut s = StreamSource::new(mass.clone(), substream(9, &[4]));
            (0..500).map(|_| s.step()).collect::<Vec<_>>()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn singleton_source() {
        let mut s = StreamSource::new(Mass::uniform(1), substream(0, &[]));
        assert!((0..10).all(|_| s.step() == 0));
    }
}
