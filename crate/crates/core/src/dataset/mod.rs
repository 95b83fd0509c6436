//! Event data model, synthetic generation, ingestion, preselection and
//! sample splitting.

mod event;
mod generator;
mod io;
mod preselection;
mod split;

pub use event::{Dataset, Event, Process, Tag};
pub use generator::{generate_synthetic, BackgroundComponent, Component, GeneratorSpec, VariableKind, VariableSpec};
pub use io::{load_events, load_events_all, write_events};
pub use preselection::{apply_preselection, Comparator, Condition, Cut, CutSet};
pub use split::{split_indices, split_samples, SampleSplit, SplitConfig};

/// Names of the twelve base discriminating variables, in canonical order.
pub const BASE_VARIABLES: [&str; 12] = [
    "pt_l", "eta_l", "q_l", "met", "mt", "njets", "pt_j1", "ht", "disc_b", "nb", "pt_b", "dr_lb",
];

/// Auxiliary kinematics used only by the preselection.
///
/// `lep_is_muon` is 1 for a muon and 0 for an electron; `pt_l2` is the
/// transverse momentum of the hardest additional lepton (0 when absent);
/// `pt_j2` and `dphi_j1j2` describe the second jet (0 when absent).
pub const PRESELECTION_VARIABLES: [&str; 5] = ["eta_j1", "lep_is_muon", "pt_l2", "pt_j2", "dphi_j1j2"];
