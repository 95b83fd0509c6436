use serde::{Deserialize, Serialize};

use crate::ising::Spin;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub spins: Vec<Spin>,
    pub energy: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverResult {
    /// Sorted by energy, lowest first.
    pub samples: Vec<Sample>,
    /// Fraction of chains whose physical spins disagreed (0 without chains).
    #[serde(default)]
    pub broken_chain_fraction: f64,
    /// Majority-vote ties settled by the run's random stream.
    #[serde(default)]
    pub tie_breaks: usize,
    pub solver: String,
    /// Wall-clock seconds; not serialized so results stay reproducible.
    #[serde(skip)]
    pub elapsed_secs: f64,
}

impl PartialEq for SolverResult {
    fn eq(&self, other: &Self) -> bool {
        self.samples == other.samples
            && self.broken_chain_fraction == other.broken_chain_fraction
            && self.tie_breaks == other.tie_breaks
            && self.solver == other.solver
    }
}

impl SolverResult {
    pub(crate) fn sort(samples: &mut [Sample]) {
        samples.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    }

    pub fn best(&self) -> Option<&Sample> {
        self.samples.first()
    }
}
