use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ising::ProblemOptions;
use crate::solver::SolverConfig;

/// Which event weights enter `C_I` and `C_IJ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrainingWeights {
    /// Every training event counts once.
    #[default]
    Unit,
    /// Expected-yield weights as stored on the events.
    Event,
}

/// How a qubit is judged to worsen the objective before the `p_f` flip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlipRule {
    /// The spin is anti-aligned with its local field in `H(t)`:
    /// `s_i (h_i + Σ_j J_ij s_j) > 0`.
    #[default]
    LocalField,
    /// Moving `μ_i` by `s_i σ` raises the training distance with every other
    /// component already at its updated value.
    ZoomMove,
}

fn default_p_f(t: usize) -> f64 {
    0.16 * 0.5f64.powi(t as i32)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ZoomConfig {
    pub iterations: usize,
    pub base: f64,
    /// Flip probability for worsening qubits, per iteration.
    pub p_f: Vec<f64>,
    /// Uniform flip probability, per iteration.
    pub q_f: Vec<f64>,
    pub flip_rule: FlipRule,
    pub cutoff_pct: f64,
    pub fixing: bool,
    pub delta: f64,
    pub range: usize,
    pub solver: SolverConfig,
    pub problem: ProblemOptions,
    pub weights: TrainingWeights,
    pub seed: u64,
}

impl Default for ZoomConfig {
    fn default() -> Self {
        let iterations = 8;
        let p_f: Vec<f64> = (0..iterations).map(default_p_f).collect();
        let q_f = p_f.iter().map(|p| p / 4.0).collect();
        ZoomConfig {
            iterations,
            base: 0.5,
            p_f,
            q_f,
            flip_rule: FlipRule::default(),
            cutoff_pct: 85.0,
            fixing: false,
            delta: 0.025,
            range: 3,
            solver: SolverConfig::default(),
            problem: ProblemOptions::default(),
            weights: TrainingWeights::default(),
            seed: 0,
        }
    }
}

fn at(v: &[f64], t: usize) -> f64 {
    v.get(t).or(v.last()).copied().unwrap_or(0.0)
}

impl ZoomConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::config("at least one zoom iteration is required"));
        }
        if !(self.base > 0.0 && self.base < 1.0) {
            return Err(Error::config(format!("zoom base must lie in (0, 1), got {}", self.base)));
        }
        if self.p_f.is_empty() || self.q_f.is_empty() {
            return Err(Error::config("flip schedules must not be empty"));
        }
        for t in 0..self.iterations.max(self.p_f.len()).max(self.q_f.len()) {
            let (p, q) = (self.p_f(t), self.q_f(t));
            if !(0.0..1.0).contains(&p) || !(0.0..1.0).contains(&q) {
                return Err(Error::config(format!("flip probabilities must lie in [0, 1) at iteration {t}")));
            }
            // q_f < p_f, with both zero allowed to switch randomization off
            if !(q < p || (p == 0.0 && q == 0.0)) {
                return Err(Error::config(format!("q_f must be below p_f at iteration {t}")));
            }
        }
        if !(0.0..=100.0).contains(&self.cutoff_pct) {
            return Err(Error::config(format!("cutoff must lie in [0, 100], got {}", self.cutoff_pct)));
        }
        if self.range > 0 && !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::config("augmentation step must be positive"));
        }
        self.solver.validate()
    }

    pub fn p_f(&self, t: usize) -> f64 {
        at(&self.p_f, t)
    }

    pub fn q_f(&self, t: usize) -> f64 {
        at(&self.q_f, t)
    }

    /// `σ(t) = b^t`.
    pub fn sigma(&self, t: usize) -> f64 {
        self.base.powi(t as i32)
    }

    /// Switches off flip randomization.
    pub fn without_flips(mut self) -> Self {
        self.p_f = vec![0.0];
        self.q_f = vec![0.0];
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = ZoomConfig::default();
        c.validate().unwrap();
        assert_eq!(c.iterations, 8);
        assert_eq!(c.p_f(0), 0.16);
        assert_eq!(c.p_f(3), 0.02);
        assert_eq!(c.q_f(3), 0.005);
        assert_eq!(c.p_f(20), c.p_f(7));
    }

    #[test]
    fn sigma_contracts_by_base() {
        let c = ZoomConfig::default();
        assert_eq!(c.sigma(0), 1.0);
        for t in 0..16 {
            assert_eq!(c.sigma(t + 1) / c.sigma(t), 0.5);
        }
    }

    #[test]
    fn rejects_bad_settings() {
        let bad = |f: fn(&mut ZoomConfig)| {
            let mut c = ZoomConfig::default();
            f(&mut c);
            c.validate().is_err()
        };
        assert!(bad(|c| c.iterations = 0));
        assert!(bad(|c| c.base = 1.0));
        assert!(bad(|c| c.q_f = vec![0.2]));
        assert!(bad(|c| c.p_f = vec![1.0]));
        assert!(bad(|c| c.cutoff_pct = 101.0));
        assert!(ZoomConfig::default().without_flips().validate().is_ok());
    }
}
