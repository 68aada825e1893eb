use crate::error::{Error, Result};
use crate::mass::Mass;

/// Largest codebook the oracle will enumerate.
const MAX_CODEWORDS: usize = 1 << 16;

/// Exact symbol-wise a-posteriori marginals by enumerating every codeword.
pub fn brute_force_map(codebook: &[Vec<u8>], evidence: &[Mass]) -> Result<Vec<Mass>> {
    if codebook.len() > MAX_CODEWORDS {
        return Err(Error::CodebookTooLarge(
            (codebook.len() as f64).log2().ceil() as usize,
        ));
    }
    let mut weights: Vec<Vec<f64>> = evidence.iter().map(|m| vec![0.0; m.len()]).collect();
    for word in codebook {
        if word.len() != evidence.len() {
            return Err(Error::LengthMismatch {
                expected: evidence.len(),
                got: word.len(),
            });
        }
        let p: f64 = word
            .iter()
            .zip(evidence)
            .map(|(&s, m)| m.get(s as usize))
            .product();
        for (w, &s) in weights.iter_mut().zip(word) {
            w[s as usize] += p;
        }
    }
    weights
        .into_iter()
        .map(|w| Mass::with_clamp(w, 0.0))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repetition_code() {
        let book = vec![vec![0, 0], vec![1, 1]];
        let uniform = vec![Mass::uniform(2), Mass::uniform(2)];
        for m in brute_force_map(&book, &uniform).unwrap() {
            assert!((m.get(0) - 0.5).abs() < 1e-15);
        }
        // bit1 ∝ (0.9·0.5, 0.1·0.5)
        let ev = vec![Mass::binary(0.9), Mass::uniform(2)];
        let m = brute_force_map(&book, &ev).unwrap();
        assert!((m[1].get(0) - 0.9).abs() < 1e-15);
        assert!((m[1].get(1) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn too_large() {
        let book = vec![vec![0u8]; MAX_CODEWORDS + 1];
        assert!(matches!(
            brute_force_map(&book, &[Mass::uniform(2)]),
            Err(Error::CodebookTooLarge(_))
        ));
    }
}
