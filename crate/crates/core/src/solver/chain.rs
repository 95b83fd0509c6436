use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::result::{Sample, SolverResult};
use super::sa::anneal_reads;
use super::schedule::AnnealSchedule;
use crate::error::{Error, Result};
use crate::ising::{IsingProblem, Spin};
use crate::rng::{keyed_rng, purpose};

/// Emulated minor embedding: each logical spin becomes a ferromagnetic
/// chain of `length` physical spins with coupling `−r·max|J|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ChainConfig {
    pub length: usize,
    /// Relative chain strength per zoom iteration (last entry repeats).
    pub strength: Vec<f64>,
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig { length: 4, strength: vec![2.0] }
    }
}

impl ChainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.length == 0 {
            return Err(Error::config("chain length must be at least 1"));
        }
        if self.strength.is_empty() || self.strength.iter().any(|r| !(*r > 0.0)) {
            return Err(Error::config("chain strengths must be positive"));
        }
        Ok(())
    }

    pub fn strength_at(&self, t: usize) -> f64 {
        self.strength.get(t).or(self.strength.last()).copied().unwrap_or(1.0)
    }
}

/// Physical problem for chains of length `len` and relative strength `r`.
pub fn embed_chains(p: &IsingProblem, len: usize, r: f64) -> Result<IsingProblem> {
    if len == 0 {
        return Err(Error::config("chain length must be at least 1"));
    }
    let mut unit = p.max_abs_coupler();
    if unit == 0.0 {
        unit = p.h.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    }
    if unit == 0.0 {
        unit = 1.0;
    }
    let n = p.n;
    let h: Vec<f64> = (0..n * len).map(|k| p.h[k / len] / len as f64).collect();
    let mut couplers = Vec::with_capacity(p.couplers.len() + n * (len - 1));
    for i in 0..n {
        for k in 0..len - 1 {
            couplers.push((i * len + k, i * len + k + 1, -r * unit));
        }
    }
    for &(i, j, v) in &p.couplers {
        couplers.push((i * len + len - 1, j * len, v));
    }
    IsingProblem::new(h, couplers)
}

/// Anneals the chained problem and decodes each chain by majority vote.
/// Ties are settled by the run's tie-break stream.
pub fn solve_chain_emulated(p: &IsingProblem, chain: &ChainConfig, schedule: &AnnealSchedule, r: f64) -> Result<SolverResult> {
    p.validate()?;
    schedule.validate()?;
    chain.validate()?;
    if !(r > 0.0) {
        return Err(Error::config("chain strength must be positive"));
    }
    let start = Instant::now();
    let len = chain.length;
    let physical = embed_chains(p, len, r)?;
    let reads = anneal_reads(&physical, schedule);
    let mut tie_rng = keyed_rng(schedule.seed, &[purpose::TIE_BREAK]);
    let mut broken = 0usize;
    let mut ties = 0usize;
    let mut samples = Vec::with_capacity(reads.len());
    for phys in reads {
        let spins: Vec<Spin> = phys
            .chunks(len)
            .map(|c| {
                let sum: i32 = c.iter().map(|&s| s as i32).sum();
                if c.iter().any(|&s| s != c[0]) {
                    broken += 1;
                }
                match sum.signum() {
                    1 => 1,
                    -1 => -1,
                    _ => {
                        ties += 1;
                        if tie_rng.random::<bool>() { 1 } else { -1 }
                    }
                }
            })
            .collect();
        let energy = p.energy_unchecked(&spins);
        samples.push(Sample { spins, energy });
    }
    let total = samples.len() * p.n;
    SolverResult::sort(&mut samples);
    Ok(SolverResult {
        samples,
        broken_chain_fraction: if total > 0 { broken as f64 / total as f64 } else { 0.0 },
        tie_breaks: ties,
        solver: format!("chain{len}"),
        elapsed_secs: start.elapsed().as_secs_f64(),
    })
}
