use rand::Rng;
use serde::{Deserialize, Serialize};

use super::problem::{check_spins, IsingProblem, Spin};
use crate::error::{Error, Result};

/// Spin relabelling `s_i → g_i s_i` that preserves the energy spectrum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaugeVector(pub Vec<Spin>);

impl GaugeVector {
    pub fn identity(n: usize) -> Self {
        GaugeVector(vec![1; n])
    }

    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Self {
        GaugeVector((0..n).map(|_| if rng.random_bool(0.5) { 1 } else { -1 }).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `h'_i = g_i h_i`, `J'_ij = g_i g_j J_ij`.
pub fn apply_gauge(p: &IsingProblem, g: &GaugeVector) -> Result<IsingProblem> {
    check_spins(&g.0, p.n).map_err(|_| Error::Dimension { expected: p.n, got: g.len() })?;
    let h = p.h.iter().zip(&g.0).map(|(h, &gi)| h * gi as f64).collect();
    let couplers = p.couplers.iter().map(|&(i, j, v)| (i, j, v * (g.0[i] * g.0[j]) as f64)).collect();
    Ok(IsingProblem { n: p.n, h, couplers, lambda: p.lambda })
}

/// Maps a solution of the gauged problem back: `s'_i = g_i s_i`.
pub fn ungauge(s: &[Spin], g: &GaugeVector) -> Result<Vec<Spin>> {
    if s.len() != g.len() {
        return Err(Error::Dimension { expected: g.len(), got: s.len() });
    }
    Ok(s.iter().zip(&g.0).map(|(a, b)| a * b).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> IsingProblem {
        IsingProblem::new(vec![0.5, -1.0, 0.25], [(0, 1, 0.3), (1, 2, -0.7), (0, 2, 1.1)]).unwrap()
    }

    #[test]
    fn identity_gauge() {
        let p = sample();
        assert_eq!(apply_gauge(&p, &GaugeVector::identity(3)).unwrap(), p);
    }

    #[test]
    fn all_minus_negates_fields_only() {
        let p = sample();
        let q = apply_gauge(&p, &GaugeVector(vec![-1; 3])).unwrap();
        assert!(q.h.iter().zip(&p.h).all(|(a, b)| *a == -*b));
        assert_eq!(q.couplers, p.couplers);
    }

    #[test]
    fn energy_identity_on_random_triples() {
        let mut rng = crate::rng::keyed_rng(12, &[]);
        for _ in 0..50 {
            let n = rng.random_range(2..12);
            let h = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
            let js: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
            let p = IsingProblem::new(h, js.into_iter().map(|(i, j)| (i, j, rng.random_range(-2.0..2.0)))).unwrap();
            let g = GaugeVector::random(n, &mut rng);
            let s: Vec<Spin> = GaugeVector::random(n, &mut rng).0;
            let lhs = p.energy(&ungauge(&s, &g).unwrap()).unwrap();
            let rhs = apply_gauge(&p, &g).unwrap().energy(&s).unwrap();
            assert!((lhs - rhs).abs() <= 1e-12);
        }
    }

    #[test]
    fn length_mismatch() {
        assert!(apply_gauge(&sample(), &GaugeVector::identity(2)).is_err());
        assert!(ungauge(&[1, 1], &GaugeVector::identity(3)).is_err());
    }
}
