use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

use super::result::{Sample, SolverResult};
use crate::error::{Error, Result};
use crate::ising::{IsingProblem, Spin};

pub const EXACT_LIMIT: usize = 24;
pub const DEFAULT_KEEP: usize = 16;

#[derive(PartialEq)]
struct Entry(f64, u32);

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

fn spins_of(mask: u32, n: usize) -> Vec<Spin> {
    (0..n).map(|k| if mask >> k & 1 == 1 { 1 } else { -1 }).collect()
}

/// Enumerates all `2^n` configurations in Gray-code order and returns the
/// `keep` lowest, with energies recomputed exactly.
pub fn solve_exact(p: &IsingProblem, keep: usize) -> Result<SolverResult> {
    let n = p.n;
    if n > EXACT_LIMIT {
        return Err(Error::SolverRefused { n, limit: EXACT_LIMIT });
    }
    let start = Instant::now();
    let keep = keep.max(1);
    let mut dense = vec![0.0; n * n];
    for &(i, j, v) in &p.couplers {
        dense[i * n + j] = v;
        dense[j * n + i] = v;
    }
    // bit k set means s_k = +1; start from all −1
    let mut s: Vec<f64> = vec![-1.0; n];
    let mut field: Vec<f64> = (0..n).map(|i| p.h[i] + (0..n).map(|j| dense[i * n + j] * s[j]).sum::<f64>()).collect();
    let mut e = p.energy_unchecked(&vec![-1; n]);
    let mut mask: u32 = 0;
    let mut heap = BinaryHeap::with_capacity(keep + 1);
    heap.push(Entry(e, mask));
    for step in 1u64..(1u64 << n) {
        let k = step.trailing_zeros() as usize;
        e -= 2.0 * s[k] * field[k];
        s[k] = -s[k];
        mask ^= 1 << k;
        let row = &dense[k * n..(k + 1) * n];
        let d = 2.0 * s[k];
        for (f, &jv) in field.iter_mut().zip(row) {
            *f += jv * d;
        }
        if heap.len() < keep {
            heap.push(Entry(e, mask));
        } else if e < heap.peek().map_or(f64::INFINITY, |t| t.0) {
            heap.pop();
            heap.push(Entry(e, mask));
        }
    }
    let mut samples: Vec<Sample> = heap
        .into_iter()
        .map(|Entry(_, m)| {
            let spins = spins_of(m, n);
            let energy = p.energy_unchecked(&spins);
            Sample { spins, energy }
        })
        .collect();
    samples.sort_by(|a, b| a.energy.total_cmp(&b.energy).then_with(|| a.spins.cmp(&b.spins)));
    Ok(SolverResult {
        samples,
        broken_chain_fraction: 0.0,
        tie_breaks: 0,
        solver: "exact".into(),
        elapsed_secs: start.elapsed().as_secs_f64(),
    })
}
