use rand::Rng;

use super::config::FlipRule;
use crate::error::{Error, Result};
use crate::ising::{check_spins, CouplingMatrices, IsingProblem, Spin};

/// Inputs the worsening test may consult.
pub struct FlipContext<'a> {
    /// Unpruned `H(t)` at the previous centre.
    pub problem: &'a IsingProblem,
    pub couplings: &'a CouplingMatrices,
    pub mu_prev: &'a [f64],
    pub sigma: f64,
}

/// `μ_i(t+1) = μ_i(t) + s_i σ(t)`.
pub fn zoom_update(mu: &[f64], s: &[Spin], sigma: f64) -> Result<Vec<f64>> {
    if mu.len() != s.len() {
        return Err(Error::Dimension { expected: mu.len(), got: s.len() });
    }
    Ok(mu.iter().zip(s).map(|(m, &si)| m + si as f64 * sigma).collect())
}

/// Two-pass randomization of a solved spin vector.
///
/// Pass one visits qubits in index order; a worsening qubit is flipped with
/// probability `p_f`, and later tests see earlier flips. Pass two flips every
/// qubit with probability `q_f`. One uniform draw is made per qubit per pass
/// whether or not it is used, so the stream layout is fixed.
pub fn flip_step<R: Rng>(ctx: &FlipContext, rule: FlipRule, s: &[Spin], p_f: f64, q_f: f64, rng: &mut R) -> Result<Vec<Spin>> {
    let p = ctx.problem;
    let n = p.n;
    check_spins(s, n)?;
    if ctx.mu_prev.len() != n || ctx.couplings.n != n {
        return Err(Error::Dimension { expected: n, got: ctx.mu_prev.len() });
    }
    let mut s = s.to_vec();
    let adj = p.adjacency();
    let mut field: Vec<f64> = (0..n)
        .map(|i| p.h[i] + adj[i].iter().map(|&(j, v)| v * s[j] as f64).sum::<f64>())
        .collect();
    let cm = ctx.couplings;
    // Cμ at the candidate centre, kept current for the zoom-move rule
    let mut mu: Vec<f64> = ctx.mu_prev.iter().zip(&s).map(|(m, &si)| m + si as f64 * ctx.sigma).collect();
    let mut c_mu: Vec<f64> = match rule {
        FlipRule::ZoomMove => (0..n).map(|i| (0..n).map(|j| cm.pair(i, j) * mu[j]).sum()).collect(),
        FlipRule::LocalField => Vec::new(),
    };
    for i in 0..n {
        let u: f64 = rng.random();
        let worsens = match rule {
            FlipRule::LocalField => s[i] as f64 * field[i] > 0.0,
            FlipRule::ZoomMove => {
                // D(μ) − D(μ − a e_i) with a = s_i σ
                let a = s[i] as f64 * ctx.sigma;
                2.0 * a * (c_mu[i] - cm.c_i[i]) - a * a * cm.pair(i, i) > 0.0
            }
        };
        if worsens && u < p_f {
            s[i] = -s[i];
            let d = 2.0 * s[i] as f64;
            for &(j, v) in &adj[i] {
                field[j] += v * d;
            }
            if rule == FlipRule::ZoomMove {
                let step = d * ctx.sigma;
                mu[i] += step;
                for (k, c) in c_mu.iter_mut().enumerate() {
                    *c += cm.pair(k, i) * step;
                }
            }
        }
    }
    for si in s.iter_mut() {
        let u: f64 = rng.random();
        if u < q_f {
            *si = -*si;
        }
    }
    Ok(s)
}
