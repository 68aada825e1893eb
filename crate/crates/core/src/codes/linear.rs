//! Binary linear block codes in systematic form.

use statrs::function::erf::erfc;

use crate::error::{Error, Result};

/// Largest dimension for which codeword enumeration is allowed.
const MAX_ENUM_K: usize = 16;

/// A binary `(n, k)` code with systematic generator `[I_k | P]` and a
/// parity-check matrix satisfying `G · Hᵀ = 0`. Entries are 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    n: usize,
    k: usize,
    generator: Vec<Vec<u8>>,
    parity_check: Vec<Vec<u8>>,
}

impl LinearCode {
    pub fn new(generator: Vec<Vec<u8>>, parity_check: Vec<Vec<u8>>) -> Result<Self> {
        let k = generator.len();
        let n = generator.first().map_or(0, Vec::len);
        let bad = |m: String| Err(Error::InvalidGraph(m));
        if k == 0 || n <= k {
            return bad(format!("need 0 < k < n, got k={k}, n={n}"));
        }
        if generator
            .iter()
            .chain(&parity_check)
            .any(|r| r.len() != n || r.iter().any(|&b| b > 1))
        {
            return bad("matrix rows must be binary vectors of length n".into());
        }
        for (i, row) in generator.iter().enumerate() {
            if (0..k).any(|j| row[j] != u8::from(i == j)) {
                return bad("generator is not systematic".into());
            }
        }
        for g in &generator {
            for h in &parity_check {
                if dot(g, h) != 0 {
                    return bad("generator rows violate a parity check".into());
                }
            }
        }
        // Systematic rows are independent, so rank(G) = k.
        Ok(Self {
            n,
            k,
            generator,
            parity_check,
        })
    }

    /// The (16, 11) extended Hamming code: the systematic (15, 11) Hamming
    /// check matrix `[A | I_4]` plus an overall even-parity row.
    pub fn extended_hamming_16_11() -> Self {
        // Columns of A: the eleven 4-bit vectors of weight >= 2, ascending.
        let cols: Vec<u8> = (1u8..16).filter(|v| v.count_ones() >= 2).collect();
        let mut h = vec![vec![0u8; 16]; 5];
        for (j, &col) in cols.iter().enumerate() {
            for (r, row) in h.iter_mut().take(4).enumerate() {
                row[j] = (col >> (3 - r)) & 1;
            }
        }
        for r in 0..4 {
            h[r][11 + r] = 1;
        }
        h[4] = vec![1; 16];

        let g = cols
            .iter()
            .enumerate()
            .map(|(i, &col)| {
                let mut row = vec![0u8; 16];
                row[i] = 1;
                for r in 0..4 {
                    row[11 + r] = (col >> (3 - r)) & 1;
                }
                row[15] = row[..15].iter().sum::<u8>() & 1;
                row
            })
            .collect();
        Self::new(g, h).expect("extended Hamming matrices are consistent")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn generator(&self) -> &[Vec<u8>] {
        &self.generator
    }

    pub fn parity_check(&self) -> &[Vec<u8>] {
        &self.parity_check
    }

    /// Systematic encoding: `info · G`.
    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>> {
        if info.len() != self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                got: info.len(),
            });
        }
        let mut word = vec![0u8; self.n];
        for (row, _) in self.generator.iter().zip(info).filter(|(_, &b)| b & 1 == 1) {
            word.iter_mut().zip(row).for_each(|(w, g)| *w ^= g);
        }
        Ok(word)
    }

    pub fn syndrome(&self, word: &[u8]) -> Vec<u8> {
        self.parity_check.iter().map(|h| dot(h, word)).collect()
    }

    pub fn is_codeword(&self, word: &[u8]) -> bool {
        word.len() == self.n && self.syndrome(word).iter().all(|&s| s == 0)
    }

    /// All `2^k` codewords, ordered by the integer value of their info bits
    /// (bit 0 of the index is info bit 0).
    pub fn codebook(&self) -> Result<Vec<Vec<u8>>> {
        if self.k > MAX_ENUM_K {
            return Err(Error::CodebookTooLarge(self.k));
        }
        (0..1usize << self.k)
            .map(|m| {
                let info: Vec<u8> = (0..self.k).map(|i| ((m >> i) & 1) as u8).collect();
                self.encode(&info)
            })
            .collect()
    }

    /// `A_w` for `w = 0..=n`, by enumeration.
    pub fn weight_distribution(&self) -> Result<Vec<u64>> {
        let mut dist = vec![0u64; self.n + 1];
        for word in self.codebook()? {
            dist[word.iter().map(|&b| b as usize).sum::<usize>()] += 1;
        }
        Ok(dist)
    }

    /// `(d_min, A_dmin)` by enumeration.
    pub fn min_distance(&self) -> Result<(usize, u64)> {
        let dist = self.weight_distribution()?;
        let d = (1..dist.len())
            .find(|&w| dist[w] > 0)
            .ok_or_else(|| Error::InvalidGraph("code has no nonzero codeword".into()))?;
        Ok((d, dist[d]))
    }
}

fn dot(a: &[u8], b: &[u8]) -> u8 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x & y)
        .fold(0, |acc, v| acc ^ v)
}

/// Gaussian tail probability `Q(x) = P(N(0,1) > x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Dominant union-bound term of the bit error rate for antipodal signalling:
/// `(A_d · d / n) · Q(sqrt(2 · (k/n) · d · Eb/N0))`.
pub fn min_distance_asymptote(code: &LinearCode, ebn0_db: f64) -> Result<f64> {
    let (d, a) = code.min_distance()?;
    let ebn0 = 10f64.powf(ebn0_db / 10.0);
    let arg = (2.0 * code.rate() * d as f64 * ebn0).sqrt();
    Ok(a as f64 * d as f64 / code.n() as f64 * q_function(arg))
}
