use super::problem::IsingProblem;
use crate::error::{Error, Result};

/// Couplers kept when removing `cutoff_pct` percent of `m`:
/// `⌈(1 − C/100)·m⌉`.
pub fn retained_count(m: usize, cutoff_pct: f64) -> usize {
    let keep = (100.0 - cutoff_pct) * m as f64 / 100.0;
    // guard against 1296.0000000002-style rounding before the ceiling
    ((keep - 1e-9).ceil().max(0.0) as usize).min(m)
}

/// Keeps the largest-magnitude couplers; ties go to the lower `(i, j)`.
/// Fields are untouched.
pub fn prune(p: &IsingProblem, cutoff_pct: f64) -> Result<IsingProblem> {
    if !(0.0..=100.0).contains(&cutoff_pct) {
        return Err(Error::config(format!("cutoff must be within [0, 100], got {cutoff_pct}")));
    }
    let keep = retained_count(p.couplers.len(), cutoff_pct);
    if keep == p.couplers.len() {
        return Ok(p.clone());
    }
    let mut order: Vec<usize> = (0..p.couplers.len()).collect();
    order.sort_by(|&a, &b| p.couplers[b].2.abs().total_cmp(&p.couplers[a].2.abs()).then(a.cmp(&b)));
    let mut kept: Vec<usize> = order[..keep].to_vec();
    kept.sort_unstable();
    Ok(IsingProblem { couplers: kept.into_iter().map(|k| p.couplers[k]).collect(), ..p.clone() })
}
