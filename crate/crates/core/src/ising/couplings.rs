use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::augment::AugmentedClassifierSet;
use super::problem::{IsingProblem, Spin};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::sum::compensated_sum;

/// Events per partial sum; partials are combined in chunk order so the
/// result does not depend on the thread count.
const CHUNK: usize = 512;

/// Weighted classifier sums
/// `C_I = Σ_τ w_τ c_I(x_τ) y_τ` and `C_IJ = Σ_τ w_τ c_I(x_τ) c_J(x_τ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingMatrices {
    pub n: usize,
    pub c_i: Vec<f64>,
    /// Dense symmetric `n × n`, row-major; the diagonal holds `C_II`.
    pub c_ij: Vec<f64>,
    pub n_events: usize,
    /// `Σ_τ w_τ`.
    pub total_weight: f64,
    /// `Σ_τ w_τ y_τ²`, the constant term of the squared distance.
    pub target_norm: f64,
}

impl CouplingMatrices {
    pub fn pair(&self, i: usize, j: usize) -> f64 {
        self.c_ij[i * self.n + j]
    }

    /// Weighted squared distance `Σ_τ w_τ (y_τ − Σ_I μ_I c_I(x_τ))²`.
    pub fn distance(&self, mu: &[f64]) -> Result<f64> {
        if mu.len() != self.n {
            return Err(Error::Dimension { expected: self.n, got: mu.len() });
        }
        let mut quad = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let row = &self.c_ij[i * self.n..(i + 1) * self.n];
            quad.push(mu[i] * row.iter().zip(mu).map(|(c, m)| c * m).sum::<f64>());
        }
        let lin = compensated_sum(self.c_i.iter().zip(mu).map(|(c, m)| -2.0 * c * m));
        Ok(self.target_norm + lin + compensated_sum(quad))
    }

    /// [`distance`](Self::distance) divided by the total weight.
    pub fn mean_distance(&self, mu: &[f64]) -> Result<f64> {
        let d = self.distance(mu)?;
        Ok(if self.total_weight > 0.0 { d / self.total_weight } else { 0.0 })
    }
}

struct Partial {
    c_i: Vec<f64>,
    c_ij: Vec<f64>,
    weight: f64,
}

/// Builds the coupling sums from per-event classifier signs.
///
/// `h` holds one weak-classifier vector per event of `data`, in order.
pub fn build_couplings(aug: &AugmentedClassifierSet, h: &[Vec<f64>], data: &Dataset) -> Result<CouplingMatrices> {
    if h.len() != data.len() {
        return Err(Error::Dimension { expected: data.len(), got: h.len() });
    }
    if data.is_empty() {
        return Err(Error::input("cannot build couplings from an empty sample"));
    }
    let n = aug.size();
    let signs: Vec<Vec<Spin>> = h.iter().map(|row| aug.signs(row)).collect::<Result<_>>()?;
    let partials: Vec<Partial> = signs
        .par_chunks(CHUNK)
        .zip(data.events.par_chunks(CHUNK))
        .map(|(s_chunk, e_chunk)| {
            let mut p = Partial { c_i: vec![0.0; n], c_ij: vec![0.0; n * n], weight: 0.0 };
            for (s, e) in s_chunk.iter().zip(e_chunk) {
                let w = e.weight;
                let wy = w * e.tag.sign();
                p.weight += w;
                for i in 0..n {
                    let si = s[i] as f64;
                    p.c_i[i] += wy * si;
                    let wsi = w * si;
                    let row = &mut p.c_ij[i * n..(i + 1) * n];
                    for j in i..n {
                        row[j] += wsi * s[j] as f64;
                    }
                }
            }
            p
        })
        .collect();

    let mut c_i = vec![0.0; n];
    let mut c_ij = vec![0.0; n * n];
    let mut weight = 0.0;
    for p in &partials {
        weight += p.weight;
        for (a, b) in c_i.iter_mut().zip(&p.c_i) {
            *a += b;
        }
        for (a, b) in c_ij.iter_mut().zip(&p.c_ij) {
            *a += b;
        }
    }
    let inv_n = 1.0 / aug.n_var as f64;
    let inv_n2 = inv_n * inv_n;
    c_i.iter_mut().for_each(|v| *v *= inv_n);
    for i in 0..n {
        for j in i..n {
            let v = c_ij[i * n + j] * inv_n2;
            c_ij[i * n + j] = v;
            c_ij[j * n + i] = v;
        }
    }
    Ok(CouplingMatrices { n, c_i, c_ij, n_events: data.len(), total_weight: weight, target_norm: weight })
}

/// Options of [`effective_problem`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProblemOptions {
    /// Additive field term.
    pub lambda: f64,
    /// Keep the `J = I` term `μ_I C_II` in the field sum.
    pub include_self: bool,
}

impl Default for ProblemOptions {
    fn default() -> Self {
        ProblemOptions { lambda: 0.0, include_self: true }
    }
}

/// Ising problem at zoom centre `μ` and width `σ`:
/// `h_I = (−C_I + Σ_J μ_J C_IJ)·σ + λ` and, for `I < J`, `J_IJ = C_IJ·σ²`
/// (the symmetric double sum `½ Σ_{I≠J} C_IJ σ² s_I s_J` written over
/// ordered pairs).
pub fn effective_problem(cm: &CouplingMatrices, mu: &[f64], sigma: f64, opts: ProblemOptions) -> Result<IsingProblem> {
    let n = cm.n;
    if mu.len() != n {
        return Err(Error::Dimension { expected: n, got: mu.len() });
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::input(format!("zoom width must be positive, got {sigma}")));
    }
    let h = (0..n)
        .map(|i| {
            let row = &cm.c_ij[i * n..(i + 1) * n];
            let pull: f64 = row
                .iter()
                .zip(mu)
                .enumerate()
                .filter(|(j, _)| opts.include_self || *j != i)
                .map(|(_, (c, m))| c * m)
                .sum();
            (pull - cm.c_i[i]) * sigma + opts.lambda
        })
        .collect();
    let s2 = sigma * sigma;
    let couplers = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| (i, j, cm.c_ij[i * n + j] * s2)).collect();
    let p = IsingProblem { n, h, couplers, lambda: opts.lambda };
    p.validate()?;
    Ok(p)
}
