//! Variable normalization, weak classifiers, derived variables and PCA.

mod derived;
mod pca;
mod pipeline;
mod weak;

pub use derived::{
    compute_derived, set_a_formulas, set_b_extra_formulas, set_b_formulas, DerivedFormula, DerivedOutput, Form,
    DIVISION_GUARD,
};
pub use pca::{apply_pca, fit_pca, PcaTransform};
pub use pipeline::{table1_variables, FeatureConfig, FeaturePipeline, VariableSet};
pub use weak::{normalize_fit, weak_fit, VariableTransform, WeakClassifierSet, WeakMode, DEFAULT_BINS};
