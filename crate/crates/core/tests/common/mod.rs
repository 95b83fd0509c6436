#![allow(dead_code)]

use qamlz::ising::{IsingProblem, Spin};
use qamlz::rng::keyed_rng;
use rand::Rng;

/// Fully connected problem with uniform fields and couplers in [−1, 1].
pub fn random_problem(n: usize, seed: u64) -> IsingProblem {
    let mut rng = keyed_rng(seed, &[0xA11]);
    let h: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mut js = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            js.push((i, j, rng.random_range(-1.0..1.0)));
        }
    }
    IsingProblem::new(h, js).unwrap()
}

/// Sparse problem with strong fields, so that field dominance fires often.
pub fn fixable_problem(n: usize, seed: u64) -> IsingProblem {
    let mut rng = keyed_rng(seed, &[0xF1F]);
    let h: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
    let mut js = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(0.35) {
                js.push((i, j, rng.random_range(-1.0..1.0)));
            }
        }
    }
    IsingProblem::new(h, js).unwrap()
}

/// Energy straight from the definition, without any library helper.
pub fn raw_energy(p: &IsingProblem, s: &[Spin]) -> f64 {
    let mut e = 0.0;
    for i in 0..p.n {
        e += p.h[i] * s[i] as f64;
    }
    for &(i, j, v) in &p.couplers {
        e += v * (s[i] as f64) * (s[j] as f64);
    }
    e
}

pub fn config(n: usize, bits: u64) -> Vec<Spin> {
    (0..n).map(|k| if bits >> k & 1 == 1 { 1 } else { -1 }).collect()
}

/// Minimum energy and every configuration within `tol` of it, by plain
/// binary counting.
pub fn enumerate_ground(p: &IsingProblem, tol: f64) -> (f64, Vec<Vec<Spin>>) {
    let energies: Vec<f64> = (0..1u64 << p.n).map(|b| raw_energy(p, &config(p.n, b))).collect();
    let min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let ground = (0..1u64 << p.n).filter(|&b| energies[b as usize] <= min + tol).map(|b| config(p.n, b)).collect();
    (min, ground)
}
