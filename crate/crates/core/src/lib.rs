//! Zoomed quantum-annealing machine learning (QAML-Z) for weighted binary
//! event classification.
//!
//! The pipeline runs in stages that mirror the modules of this crate:
//!
//! 1. [`dataset`]: weighted, tagged events; synthetic generation, CSV
//!    ingestion, preselection cuts and Train/Test/Assess splitting.
//! 2. [`features`]: normalization, histogram weak classifiers, derived
//!    variables and PCA.
//! 3. [`ising`]: augmented classifier bank, coupling sums and the
//!    per-iteration Ising problem with pruning, variable fixing and gauges.
//! 4. [`solver`]: exact enumeration, simulated annealing and a
//!    chain-emulated annealer with majority-vote readout.
//! 5. [`zoom`]: the iterative zooming loop producing the strong classifier
//!    weights.
//! 6. [`eval`]: strong-classifier scores, significance figure of merit,
//!    cut scans, run-to-run uncertainty and over-training checks.

pub mod dataset;
pub mod error;
pub mod eval;
pub mod features;
pub mod ising;
pub mod rng;
pub mod solver;
pub mod sum;
pub mod zoom;

pub use error::{Error, Result};
