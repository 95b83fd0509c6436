use serde::{Deserialize, Serialize};

use super::problem::{sign, Spin};
use crate::error::{Error, Result};
use crate::features::WeakClassifierSet;

/// Offset copies `c_il(x) = sgn(h_i(x) + δ·l) / N` for `l ∈ [−A, A]`.
///
/// Spins are laid out variable-major with ascending offset:
/// `I = i·(2A+1) + (l + A)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AugmentedClassifierSet {
    pub n_var: usize,
    pub delta: f64,
    pub range: usize,
}

impl AugmentedClassifierSet {
    pub fn new(n_var: usize, delta: f64, range: usize) -> Result<Self> {
        if n_var == 0 {
            return Err(Error::config("augmentation needs at least one base classifier"));
        }
        if range > 0 && !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::config(format!("augmentation step must be positive, got {delta}")));
        }
        Ok(AugmentedClassifierSet { n_var, delta, range })
    }

    pub fn per_variable(&self) -> usize {
        2 * self.range + 1
    }

    /// Number of spins `N_v = N_var·(2A+1)`.
    pub fn size(&self) -> usize {
        self.n_var * self.per_variable()
    }

    /// Couplers of the fully connected problem, `N_v(N_v−1)/2`.
    pub fn n_couplers(&self) -> usize {
        let n = self.size();
        n * n.saturating_sub(1) / 2
    }

    pub fn index(&self, i: usize, l: isize) -> usize {
        i * self.per_variable() + (l + self.range as isize) as usize
    }

    /// `(i, l)` of spin `I`.
    pub fn variable_offset(&self, index: usize) -> (usize, isize) {
        let k = self.per_variable();
        (index / k, (index % k) as isize - self.range as isize)
    }

    /// Additive offsets `δ·l` in ascending `l`.
    pub fn offsets(&self) -> Vec<f64> {
        let a = self.range as isize;
        (-a..=a).map(|l| self.delta * l as f64).collect()
    }

    /// Signs of all `N_v` classifiers for one event's `h` vector.
    pub fn signs(&self, h: &[f64]) -> Result<Vec<Spin>> {
        if h.len() != self.n_var {
            return Err(Error::Dimension { expected: self.n_var, got: h.len() });
        }
        let offsets = self.offsets();
        Ok(h.iter().flat_map(|&hi| offsets.iter().map(move |o| sign(hi + o))).collect())
    }

    /// Classifier values `c_I(x) = sgn(...)/N`.
    pub fn classify(&self, h: &[f64]) -> Result<Vec<f64>> {
        let n = self.n_var as f64;
        Ok(self.signs(h)?.into_iter().map(|s| s as f64 / n).collect())
    }
}

/// Augments a fitted weak-classifier set.
pub fn augment(base: &WeakClassifierSet, delta: f64, range: usize) -> Result<AugmentedClassifierSet> {
    AugmentedClassifierSet::new(base.len(), delta, range)
}
