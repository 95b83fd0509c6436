//! Ising samplers: exhaustive enumeration, simulated annealing, emulated
//! chain embedding and an external-process backend.

mod chain;
mod exact;
mod external;
mod result;
mod sa;
mod schedule;
mod select;

pub use chain::{embed_chains, solve_chain_emulated, ChainConfig};
pub use exact::{solve_exact, DEFAULT_KEEP, EXACT_LIMIT};
pub use external::ExternalSolver;
pub use result::{Sample, SolverResult};
pub use sa::solve_sa;
pub use schedule::{AnnealSchedule, Ladder};
pub use select::select_states;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ising::IsingProblem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    Exact,
    Sa,
    Chain,
    External,
}

impl std::str::FromStr for SolverKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(SolverKind::Exact),
            "sa" => Ok(SolverKind::Sa),
            "chain" => Ok(SolverKind::Chain),
            "external" => Ok(SolverKind::External),
            _ => Err(Error::config(format!("unknown solver '{s}'"))),
        }
    }
}

/// Solver choice plus everything needed to run it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub kind: SolverKind,
    pub schedule: AnnealSchedule,
    pub chain: ChainConfig,
    pub external: Option<ExternalSolver>,
    pub exact_keep: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            kind: SolverKind::Sa,
            schedule: AnnealSchedule::default(),
            chain: ChainConfig::default(),
            external: None,
            exact_keep: DEFAULT_KEEP,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        self.schedule.validate()?;
        self.chain.validate()?;
        if self.kind == SolverKind::External && self.external.is_none() {
            return Err(Error::config("external solver selected without a program"));
        }
        Ok(())
    }

    /// Solves `p` at zoom iteration `t` with stream seed `seed`.
    pub fn solve(&self, p: &IsingProblem, t: usize, seed: u64) -> Result<SolverResult> {
        let schedule = AnnealSchedule { seed, ..self.schedule.clone() };
        match self.kind {
            SolverKind::Exact => solve_exact(p, self.exact_keep),
            SolverKind::Sa => solve_sa(p, &schedule),
            SolverKind::Chain => solve_chain_emulated(p, &self.chain, &schedule, self.chain.strength_at(t)),
            SolverKind::External => match &self.external {
                Some(x) => x.solve(p),
                None => Err(Error::config("external solver selected without a program")),
            },
        }
    }
}
