use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use super::result::{Sample, SolverResult};
use super::schedule::AnnealSchedule;
use crate::error::Result;
use crate::ising::{IsingProblem, Spin};
use crate::rng::{keyed_rng, purpose};

/// Compressed adjacency for fast local-field updates.
pub(crate) struct Csr {
    offsets: Vec<usize>,
    targets: Vec<(usize, f64)>,
}

impl Csr {
    pub(crate) fn new(p: &IsingProblem) -> Self {
        let adj = p.adjacency();
        let mut offsets = Vec::with_capacity(p.n + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for row in adj {
            targets.extend(row);
            offsets.push(targets.len());
        }
        Csr { offsets, targets }
    }

    fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }
}

fn flip(s: &mut [Spin], field: &mut [f64], csr: &Csr, i: usize) {
    s[i] = -s[i];
    let d = 2.0 * s[i] as f64;
    for &(j, v) in csr.row(i) {
        field[j] += v * d;
    }
}

/// A single anneal from a random start, using the read's own stream.
pub(crate) fn anneal_read(p: &IsingProblem, csr: &Csr, temps: &[f64], greedy: bool, seed: u64, read: u64) -> Vec<Spin> {
    let mut rng = keyed_rng(seed, &[purpose::READ, read]);
    let n = p.n;
    let mut s: Vec<Spin> = (0..n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
    let mut field: Vec<f64> = (0..n)
        .map(|i| p.h[i] + csr.row(i).iter().map(|&(j, v)| v * s[j] as f64).sum::<f64>())
        .collect();
    for &temp in temps {
        let beta = 1.0 / temp;
        for i in 0..n {
            let de = -2.0 * s[i] as f64 * field[i];
            if de <= 0.0 || rng.random::<f64>() < (-de * beta).exp() {
                flip(&mut s, &mut field, csr, i);
            }
        }
    }
    if greedy {
        loop {
            let mut changed = false;
            for i in 0..n {
                if s[i] as f64 * field[i] > 0.0 {
                    flip(&mut s, &mut field, csr, i);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }
    s
}

/// Reads in read-index order (unsorted).
pub(crate) fn anneal_reads(p: &IsingProblem, schedule: &AnnealSchedule) -> Vec<Vec<Spin>> {
    let csr = Csr::new(p);
    let temps = schedule.temperatures(p);
    (0..schedule.n_reads as u64)
        .into_par_iter()
        .map(|r| anneal_read(p, &csr, &temps, schedule.greedy_finish, schedule.seed, r))
        .collect()
}

/// Classical simulated annealing with Metropolis single-spin sweeps.
/// Every read draws from its own keyed stream, so results do not depend on
/// thread count or scheduling.
pub fn solve_sa(p: &IsingProblem, schedule: &AnnealSchedule) -> Result<SolverResult> {
    p.validate()?;
    schedule.validate()?;
    let start = Instant::now();
    let mut samples: Vec<Sample> = anneal_reads(p, schedule)
        .into_iter()
        .map(|spins| {
            let energy = p.energy_unchecked(&spins);
            Sample { spins, energy }
        })
        .collect();
    SolverResult::sort(&mut samples);
    Ok(SolverResult {
        samples,
        broken_chain_fraction: 0.0,
        tie_breaks: 0,
        solver: "sa".into(),
        elapsed_secs: start.elapsed().as_secs_f64(),
    })
}
