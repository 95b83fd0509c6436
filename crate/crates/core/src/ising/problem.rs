use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A spin value, −1 or +1.
pub type Spin = i8;

/// `sgn` with `sgn(0) = +1`.
pub fn sign(x: f64) -> Spin {
    if x >= 0.0 {
        1
    } else {
        -1
    }
}

/// `E(s) = Σ_i h_i s_i + Σ_{i<j} J_ij s_i s_j`.
///
/// Couplers are kept sorted by `(i, j)` with `i < j` and no duplicates.
/// `lambda` is informational: when non-zero it has already been added to
/// every field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsingProblem {
    pub n: usize,
    pub h: Vec<f64>,
    #[serde(rename = "J")]
    pub couplers: Vec<(usize, usize, f64)>,
    #[serde(default)]
    pub lambda: f64,
}

impl IsingProblem {
    /// Builds a problem, normalizing coupler keys to `i < j` and merging
    /// duplicates.
    pub fn new(h: Vec<f64>, couplers: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let n = h.len();
        let mut js: Vec<(usize, usize, f64)> = Vec::new();
        for (i, j, v) in couplers {
            if i == j {
                return Err(Error::input(format!("self-coupler on spin {i}")));
            }
            if i >= n || j >= n {
                return Err(Error::input(format!("coupler ({i},{j}) outside {n} spins")));
            }
            js.push((i.min(j), i.max(j), v));
        }
        js.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        js.dedup_by(|next, kept| {
            if (next.0, next.1) == (kept.0, kept.1) {
                kept.2 += next.2;
                true
            } else {
                false
            }
        });
        let p = IsingProblem { n, h, couplers: js, lambda: 0.0 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.h.len() != self.n {
            return Err(Error::Dimension { expected: self.n, got: self.h.len() });
        }
        if self.h.iter().any(|v| !v.is_finite()) || !self.lambda.is_finite() {
            return Err(Error::input("non-finite field"));
        }
        let mut prev: Option<(usize, usize)> = None;
        for &(i, j, v) in &self.couplers {
            if !(i < j && j < self.n) {
                return Err(Error::input(format!("coupler key ({i},{j}) must satisfy i < j < n")));
            }
            if !v.is_finite() {
                return Err(Error::input(format!("non-finite coupler ({i},{j})")));
            }
            if prev.is_some_and(|p| p >= (i, j)) {
                return Err(Error::input("coupler keys must be strictly increasing"));
            }
            prev = Some((i, j));
        }
        Ok(())
    }

    pub fn n_couplers(&self) -> usize {
        self.couplers.len()
    }

    /// Energy of `s`; rejects entries other than ±1.
    pub fn energy(&self, s: &[Spin]) -> Result<f64> {
        check_spins(s, self.n)?;
        Ok(self.energy_unchecked(s))
    }

    pub(crate) fn energy_unchecked(&self, s: &[Spin]) -> f64 {
        let mut e = 0.0;
        for (h, &si) in self.h.iter().zip(s) {
            e += h * si as f64;
        }
        for &(i, j, v) in &self.couplers {
            e += v * (s[i] * s[j]) as f64;
        }
        e
    }

    /// Largest `|h_i| + Σ_j |J_ij|` over spins; the natural energy scale of a
    /// single flip.
    pub fn scale(&self) -> f64 {
        let mut row: Vec<f64> = self.h.iter().map(|h| h.abs()).collect();
        for &(i, j, v) in &self.couplers {
            row[i] += v.abs();
            row[j] += v.abs();
        }
        row.into_iter().fold(0.0, f64::max)
    }

    pub fn max_abs_coupler(&self) -> f64 {
        self.couplers.iter().fold(0.0, |m, c| m.max(c.2.abs()))
    }

    /// Neighbour lists: for each spin, `(other, J)` pairs.
    pub fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(i, j, v) in &self.couplers {
            adj[i].push((j, v));
            adj[j].push((i, v));
        }
        adj
    }
}

pub fn check_spins(s: &[Spin], n: usize) -> Result<()> {
    if s.len() != n {
        return Err(Error::Dimension { expected: n, got: s.len() });
    }
    if let Some(k) = s.iter().position(|&v| v != 1 && v != -1) {
        return Err(Error::input(format!("spin {k} is {} (must be ±1)", s[k])));
    }
    Ok(())
}

/// Free-function form of [`IsingProblem::energy`].
pub fn energy(p: &IsingProblem, s: &[Spin]) -> Result<f64> {
    p.energy(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decoupled_minimum() {
        let p = IsingProblem::new(vec![1.0, -1.0], []).unwrap();
        assert_eq!(p.energy(&[-1, 1]).unwrap(), -2.0);
    }

    #[test]
    fn ferromagnetic_pair() {
        let p = IsingProblem::new(vec![0.0, 0.0], [(0, 1, -1.0)]).unwrap();
        assert_eq!(p.energy(&[1, 1]).unwrap(), -1.0);
    }

    #[test]
    fn invalid_spin_rejected() {
        let p = IsingProblem::new(vec![0.0, 0.0], []).unwrap();
        assert!(p.energy(&[1, 0]).is_err());
        assert!(p.energy(&[1]).is_err());
    }

    #[test]
    fn keys_normalized_and_merged() {
        let p = IsingProblem::new(vec![0.0; 3], [(2, 0, 1.0), (0, 2, 0.5), (1, 2, 2.0)]).unwrap();
        assert_eq!(p.couplers, vec![(0, 2, 1.5), (1, 2, 2.0)]);
        assert!(IsingProblem::new(vec![0.0; 2], [(1, 1, 1.0)]).is_err());
    }

    #[test]
    fn six_spin_minimum_matches_enumeration() {
        let mut rng = crate::rng::keyed_rng(4, &[]);
        use rand::Rng;
        let h: Vec<f64> = (0..6).map(|_| rng.random_range(-1.0..1.0)).collect();
        let js: Vec<_> = (0..6).flat_map(|i| (i + 1..6).map(move |j| (i, j))).map(|(i, j)| (i, j, rng.random_range(-1.0..1.0))).collect();
        let p = IsingProblem::new(h.clone(), js.clone()).unwrap();
        let mut best = f64::INFINITY;
        for mask in 0u32..64 {
            let s: Vec<f64> = (0..6).map(|k| if mask >> k & 1 == 1 { 1.0 } else { -1.0 }).collect();
            let mut e: f64 = h.iter().zip(&s).map(|(a, b)| a * b).sum();
            for &(i, j, v) in &js {
                e += v * s[i] * s[j];
            }
            let spins: Vec<Spin> = s.iter().map(|&x| x as Spin).collect();
            assert!((p.energy(&spins).unwrap() - e).abs() < 1e-12);
            best = best.min(e);
        }
        let min = (0u32..64)
            .map(|mask| p.energy(&(0..6).map(|k| if mask >> k & 1 == 1 { 1 } else { -1 }).collect::<Vec<_>>()).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert_eq!(min, best);
    }

    #[test]
    fn json_layout() {
        let p = IsingProblem::new(vec![0.5, -1.0], [(0, 1, 0.25)]).unwrap();
        let v: serde_json::Value = serde_json::to_value(&p).unwrap();
        assert_eq!(v["n"], 2);
        assert_eq!(v["J"][0], serde_json::json!([0, 1, 0.25]));
        assert_eq!(v["lambda"], 0.0);
        let back: IsingProblem = serde_json::from_value(v).unwrap();
        assert_eq!(back, p);
    }
}
