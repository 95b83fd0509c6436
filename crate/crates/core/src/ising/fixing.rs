use super::problem::{sign, IsingProblem, Spin};
use crate::error::{Error, Result};

/// Outcome of [`fix_variables`].
#[derive(Debug, Clone, PartialEq)]
pub struct FixedVariables {
    /// Assignment per original spin; `None` for free spins.
    pub assignments: Vec<Option<Spin>>,
    /// Problem over the free spins, fields including the pull of the fixed
    /// ones.
    pub reduced: IsingProblem,
    /// Original index of each reduced spin.
    pub free: Vec<usize>,
    /// Energy contributed by fixed spins alone, so that
    /// `E(full) = E_reduced(free part) + offset`.
    pub offset: f64,
}

impl FixedVariables {
    pub fn n_fixed(&self) -> usize {
        self.assignments.iter().filter(|a| a.is_some()).count()
    }

    /// Full spin vector from a configuration of the reduced problem.
    pub fn expand(&self, reduced: &[Spin]) -> Result<Vec<Spin>> {
        if reduced.len() != self.free.len() {
            return Err(Error::Dimension { expected: self.free.len(), got: reduced.len() });
        }
        let mut s: Vec<Spin> = self.assignments.iter().map(|a| a.unwrap_or(1)).collect();
        for (&k, &v) in self.free.iter().zip(reduced) {
            s[k] = v;
        }
        Ok(s)
    }
}

/// Iterated field dominance: a spin whose effective field outweighs the
/// total magnitude of its couplings to free spins takes `−sgn(field)` in
/// every ground state. Fixed spins are folded into their neighbours' fields
/// and the scan repeats until nothing changes.
pub fn fix_variables(p: &IsingProblem) -> FixedVariables {
    let adj = p.adjacency();
    let mut assignments: Vec<Option<Spin>> = vec![None; p.n];
    let mut field = p.h.clone();
    loop {
        let mut changed = false;
        for i in 0..p.n {
            if assignments[i].is_some() {
                continue;
            }
            let coupling: f64 = adj[i].iter().filter(|(j, _)| assignments[*j].is_none()).map(|(_, v)| v.abs()).sum();
            if field[i].abs() > coupling {
                let s = -sign(field[i]);
                assignments[i] = Some(s);
                for &(j, v) in &adj[i] {
                    if assignments[j].is_none() {
                        field[j] += v * s as f64;
                    }
                }
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let free: Vec<usize> = (0..p.n).filter(|&i| assignments[i].is_none()).collect();
    let mut position = vec![usize::MAX; p.n];
    for (k, &i) in free.iter().enumerate() {
        position[i] = k;
    }
    let mut offset = 0.0;
    for (i, a) in assignments.iter().enumerate() {
        if let Some(s) = a {
            offset += p.h[i] * *s as f64;
        }
    }
    let mut couplers = Vec::new();
    for &(i, j, v) in &p.couplers {
        match (assignments[i], assignments[j]) {
            (None, None) => couplers.push((position[i], position[j], v)),
            (Some(a), Some(b)) => offset += v * (a * b) as f64,
            _ => {}
        }
    }
    let reduced = IsingProblem { n: free.len(), h: free.iter().map(|&i| field[i]).collect(), couplers, lambda: p.lambda };
    FixedVariables { assignments, reduced, free, offset }
}
