//! Augmented classifier bank, coupling sums and the per-iteration Ising
//! problem, with pruning, variable fixing and gauges.

mod augment;
mod couplings;
mod fixing;
mod gauge;
mod problem;
mod prune;

pub use augment::{augment, AugmentedClassifierSet};
pub use couplings::{build_couplings, effective_problem, CouplingMatrices, ProblemOptions};
pub use fixing::{fix_variables, FixedVariables};
pub use gauge::{apply_gauge, ungauge, GaugeVector};
pub use problem::{check_spins, energy, sign, IsingProblem, Spin};
pub use prune::{prune, retained_count};
