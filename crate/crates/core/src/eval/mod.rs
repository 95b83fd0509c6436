//! Strong-classifier scoring, significance scans and over-training checks.

mod auc;
mod fom;
mod ks;
mod rank;
mod scan;
mod score;
mod uncertainty;

pub use auc::auc;
pub use fom::{asimov, fom, fom_detail, FomParams, FomValue, BDT_REFERENCE_FOM};
pub use ks::{kolmogorov_q, ks_two_sample, overtraining_check, ClassKs, KsResult};
pub use rank::{rank_variables, CutDirection, VariableRank, DERIVED_REFERENCE_FOM};
pub use scan::{fom_scan, BestCut, CutGrid, FomCurve, ScanOptions, Scored};
pub use score::{scored_classes, strong_score};
pub use uncertainty::{run_uncertainty, UncertaintyReport};
