//! Antipodal signalling over an additive white Gaussian noise channel.
//!
//! Bit 0 maps to +1 and bit 1 to -1. Noise variance follows the usual
//! rate-adjusted convention `σ² = 1 / (2 · R · Eb/N0)` for unit-energy symbols.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::mass::Mass;
use crate::rng::{substream, tag};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    ebn0_db: f64,
    rate: f64,
    sigma: f64,
}

impl ChannelConfig {
    pub fn new(ebn0_db: f64, rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(Error::ConfigInvalid(format!(
                "code rate {rate} outside (0, 1]"
            )));
        }
        if !ebn0_db.is_finite() {
            return Err(Error::ConfigInvalid(format!(
                "Eb/N0 {ebn0_db} dB is not finite"
            )));
        }
        let variance = 1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0));
        let sigma = variance.sqrt();
        if sigma.is_nan() || sigma <= 0.0 {
            return Err(Error::ConfigInvalid(format!(
                "Eb/N0 {ebn0_db} dB leaves no noise"
            )));
        }
        Ok(Self {
            ebn0_db,
            rate,
            sigma,
        })
    }

    pub fn ebn0_db(&self) -> f64 {
        self.ebn0_db
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn noise_sigma(&self) -> f64 {
        self.sigma
    }

    pub fn noise_variance(&self) -> f64 {
        self.sigma * self.sigma
    }
}

/// `y_i = (1 - 2 c_i) + n_i`, with noise drawn from the stream keyed by `seed`.
pub fn transmit(codeword: &[u8], cfg: &ChannelConfig, seed: u64) -> Vec<f64> {
    let mut rng = substream(seed, &[tag::NOISE]);
    codeword
        .iter()
        .map(|&c| {
            let n: f64 = rng.sample(StandardNormal);
            1.0 - 2.0 * f64::from(c) + cfg.sigma * n
        })
        .collect()
}

/// Posterior mass of a bit given one channel sample (uniform prior), clamped.
pub fn to_evidence(y: f64, cfg: &ChannelConfig) -> Mass {
    let llr = 2.0 * y / cfg.noise_variance();
    let p0 = 1.0 / (1.0 + (-llr).exp());
    Mass::binary(p0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mass::CLAMP_EPS;

    #[test]
    fn sigma_convention() {
        let cfg = ChannelConfig::new(0.0, 0.5).unwrap();
        assert!((cfg.noise_variance() - 1.0).abs() < 1e-15);
        assert!(ChannelConfig::new(3.0, 0.0).is_err());
        assert!(ChannelConfig::new(3.0, 1.5).is_err());
    }

    #[test]
    fn noiseless_limit() {
        let cfg = ChannelConfig::new(200.0, 11.0 / 16.0).unwrap();
        let y = transmit(&[0, 1, 1, 0], &cfg, 1);
        for (v, e) in y.iter().zip([1.0, -1.0, -1.0, 1.0]) {
            assert!((v - e).abs() < 1e-8);
        }
    }

    #[test]
    fn noise_variance_matches() {
        let cfg = ChannelConfig::new(2.0, 0.5).unwrap();
        let word = vec![0u8; 1_000_000];
        let y = transmit(&word, &cfg, 99);
        let n = y.len() as f64;
        let mean = y.iter().map(|v| v - 1.0).sum::<f64>() / n;
        let var = y.iter().map(|v| (v - 1.0 - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert!((var / cfg.noise_variance() - 1.0).abs() < 0.01);
        assert_eq!(
            transmit(&word[..64], &cfg, 99),
            transmit(&word[..64], &cfg, 99)
        );
    }

    #[test]
    fn evidence_values() {
        let cfg = ChannelConfig::new(1.0, 0.5).unwrap();
        assert!((to_evidence(0.0, &cfg).get(0) - 0.5).abs() < 1e-15);
        let far = to_evidence(1e6, &cfg);
        assert!((far.get(1) - CLAMP_EPS).abs() < 1e-15);
        let half = to_evidence(cfg.noise_variance() / 2.0, &cfg);
        assert!((half.get(0) - 1.0 / (1.0 + (-1.0f64).exp())).abs() < 1e-12);
        assert!((half.get(0) - 0.731_058_578_630_004_9).abs() < 1e-12);
        for y in [-2.0, -0.3, 0.7, 4.0] {
            let (a, b) = (to_evidence(y, &cfg), to_evidence(-y, &cfg));
            assert!((a.get(0) - b.get(1)).abs() < 1e-15);
        }
    }

    #[test]
    fn high_snr_hard_decisions() {
        let cfg = ChannelConfig::new(8.0, 11.0 / 16.0).unwrap();
        let word = vec![0u8; 200_000];
        let y = transmit(&word, &cfg, 4);
        let errors = y
            .iter()
            .filter(|&&v| to_evidence(v, &cfg).argmax() != 0)
            .count();
        let bound = crate::codes::q_function(1.0 / cfg.noise_sigma()) + 1e-3;
        assert!((errors as f64 / word.len() as f64) < bound);
    }
}
