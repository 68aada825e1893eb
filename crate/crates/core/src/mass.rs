//! Normalized probability masses over a dense alphabet.

use crate::error::{Error, Result};

/// Default clamp: entries are kept in `[CLAMP_EPS, 1 - CLAMP_EPS]` so that every
/// symbol stays reachable by a stochastic source.
pub const CLAMP_EPS: f64 = 1e-6;

/// A probability mass vector whose entries lie in the open interval (0, 1)
/// and sum to one. Masses over a single-symbol alphabet are `[1.0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mass(Vec<f64>);

impl Mass {
    /// Normalizes non-negative weights and clamps with [`CLAMP_EPS`].
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        Self::with_clamp(weights, CLAMP_EPS)
    }

    /// Normalizes non-negative weights and clamps entries into `[eps, 1 - eps]`.
    pub fn with_clamp(mut weights: Vec<f64>, eps: f64) -> Result<Self> {
        normalize_clamp(&mut weights, eps)?;
        Ok(Self(weights))
    }

    pub fn uniform(size: usize) -> Self {
        Self(vec![1.0 / size as f64; size])
    }

    /// The clamped point mass on `symbol`.
    pub fn point(size: usize, symbol: usize) -> Self {
        let mut w = vec![0.0; size];
        w[symbol] = 1.0;
        Self::new(w).expect("point mass has a positive entry")
    }

    /// A binary mass `(p0, 1 - p0)`, clamped.
    pub fn binary(p0: f64) -> Self {
        Self::new(vec![p0, 1.0 - p0]).expect("binary mass has a positive entry")
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, symbol: usize) -> f64 {
        self.0[symbol]
    }

    /// Most probable symbol; ties resolve to the lowest index.
    pub fn argmax(&self) -> usize {
        argmax(&self.0)
    }

    pub fn total_variation(&self, other: &Mass) -> f64 {
        0.5 * self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
    }

    pub fn max_abs_diff(&self, other: &Mass) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

/// Index of the largest entry, lowest index on ties.
pub fn argmax<T: PartialOrd + Copy>(values: &[T]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Normalizes in place, then clamps into `[eps, 1 - eps]` and renormalizes.
pub fn normalize_clamp(values: &mut [f64], eps: f64) -> Result<()> {
    if values.len() == 1 {
        values[0] = 1.0;
        return Ok(());
    }
    let total: f64 = values.iter().sum();
    if total <= 0.0 || !total.is_finite() || values.iter().any(|v| *v < 0.0) {
        return Err(Error::DegenerateMass);
    }
    values.iter_mut().for_each(|v| *v /= total);
    if values.iter().any(|&v| v < eps || v > 1.0 - eps) {
        values.iter_mut().for_each(|v| *v = v.clamp(eps, 1.0 - eps));
        let total: f64 = values.iter().sum();
        values.iter_mut().for_each(|v| *v /= total);
    }
    Ok(())
}
