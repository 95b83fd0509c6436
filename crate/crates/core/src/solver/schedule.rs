use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ising::IsingProblem;

/// Temperature ladder of the annealer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Ladder {
    /// Geometric from `hot_factor·scale` down to `cold_factor·scale`, where
    /// `scale = max_i(|h_i| + Σ_j |J_ij|)` of the problem being solved.
    Relative { hot_factor: f64, cold_factor: f64 },
    /// Geometric between absolute temperatures.
    Absolute { hot: f64, cold: f64 },
}

impl Default for Ladder {
    fn default() -> Self {
        Ladder::Relative { hot_factor: 2.0, cold_factor: 1e-2 }
    }
}

/// Sampling protocol: reads and sweeps per anneal, plus the per-iteration
/// gauge counts `n_g(t)`, excited-state caps `n_e(t)` and energy windows
/// `d(t)` used by the zoom loop. Per-iteration lists repeat their last
/// entry beyond their length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnnealSchedule {
    pub n_reads: usize,
    pub sweeps: usize,
    pub ladder: Ladder,
    /// Zero-temperature single-flip descent after the last sweep.
    pub greedy_finish: bool,
    pub gauges: Vec<usize>,
    pub excited: Vec<usize>,
    /// Absolute windows above the best energy; `None` uses
    /// `0.05·|E_best(t)|`.
    pub window: Option<Vec<f64>>,
    pub seed: u64,
}

impl Default for AnnealSchedule {
    fn default() -> Self {
        AnnealSchedule {
            n_reads: 200,
            sweeps: 1000,
            ladder: Ladder::default(),
            greedy_finish: true,
            gauges: vec![50, 10],
            excited: vec![1],
            window: None,
            seed: 0,
        }
    }
}

fn at<T: Copy>(v: &[T], t: usize) -> Option<T> {
    v.get(t).or(v.last()).copied()
}

impl AnnealSchedule {
    pub fn validate(&self) -> Result<()> {
        if self.n_reads == 0 || self.sweeps == 0 {
            return Err(Error::config("n_reads and sweeps must be at least 1"));
        }
        match self.ladder {
            Ladder::Relative { hot_factor, cold_factor } if !(hot_factor > cold_factor && cold_factor > 0.0) => {
                return Err(Error::config("temperature ladder must strictly decrease to a positive value"));
            }
            Ladder::Absolute { hot, cold } if !(hot > cold && cold > 0.0) => {
                return Err(Error::config("temperature ladder must strictly decrease to a positive value"));
            }
            _ => {}
        }
        if self.gauges.is_empty() || self.gauges.contains(&0) || self.excited.is_empty() || self.excited.contains(&0) {
            return Err(Error::config("gauge and excited-state counts must be non-empty and at least 1"));
        }
        if let Some(w) = &self.window {
            if w.is_empty() || w.iter().any(|d| !(*d >= 0.0)) {
                return Err(Error::config("energy windows must be non-negative"));
            }
        }
        Ok(())
    }

    pub fn gauges_at(&self, t: usize) -> usize {
        at(&self.gauges, t).unwrap_or(1)
    }

    pub fn excited_at(&self, t: usize) -> usize {
        at(&self.excited, t).unwrap_or(1)
    }

    pub fn window_at(&self, t: usize, best: f64) -> f64 {
        match self.window.as_deref().and_then(|w| at(w, t)) {
            Some(d) => d,
            None => 0.05 * best.abs(),
        }
    }

    /// One temperature per sweep, strictly decreasing.
    pub fn temperatures(&self, p: &IsingProblem) -> Vec<f64> {
        let (hot, cold) = match self.ladder {
            Ladder::Relative { hot_factor, cold_factor } => {
                let scale = p.scale();
                let scale = if scale > 0.0 { scale } else { 1.0 };
                (hot_factor * scale, cold_factor * scale)
            }
            Ladder::Absolute { hot, cold } => (hot, cold),
        };
        if self.sweeps == 1 {
            return vec![cold];
        }
        let ratio = (cold / hot).ln() / (self.sweeps - 1) as f64;
        (0..self.sweeps).map(|k| hot * (ratio * k as f64).exp()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_is_geometric_and_decreasing() {
        let p = IsingProblem::new(vec![1.0, -0.5], [(0, 1, 1.0)]).unwrap();
        let s = AnnealSchedule { sweeps: 5, ..Default::default() };
        let t = s.temperatures(&p);
        assert_eq!(t.len(), 5);
        assert!((t[0] - 4.0).abs() < 1e-12 && (t[4] - 0.02).abs() < 1e-12);
        assert!(t.windows(2).all(|w| w[1] < w[0]));
        let r = t[1] / t[0];
        assert!(t.windows(2).all(|w| (w[1] / w[0] - r).abs() < 1e-12));
    }

    #[test]
    fn per_iteration_lists_repeat_last_entry() {
        let s = AnnealSchedule { gauges: vec![50, 10], excited: vec![16, 4, 1], ..Default::default() };
        assert_eq!((0..5).map(|t| s.gauges_at(t)).collect::<Vec<_>>(), vec![50, 10, 10, 10, 10]);
        assert_eq!((0..5).map(|t| s.excited_at(t)).collect::<Vec<_>>(), vec![16, 4, 1, 1, 1]);
        assert_eq!(s.window_at(0, -2.0), 0.1);
    }

    #[test]
    fn validation() {
        assert!(AnnealSchedule::default().validate().is_ok());
        assert!(AnnealSchedule { n_reads: 0, ..Default::default() }.validate().is_err());
        assert!(AnnealSchedule { ladder: Ladder::Absolute { hot: 1.0, cold: 2.0 }, ..Default::default() }.validate().is_err());
        assert!(AnnealSchedule { gauges: vec![0], ..Default::default() }.validate().is_err());
    }
}
