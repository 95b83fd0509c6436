use serde::{Deserialize, Serialize};

use super::derived::{compute_derived, set_a_formulas, set_b_formulas, DerivedFormula};
use super::pca::{fit_pca, PcaTransform};
use super::weak::{normalize_fit, weak_fit, WeakClassifierSet, DEFAULT_BINS};
use crate::dataset::{Dataset, Event};
use crate::error::{Error, Result};

/// Variable-set selector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum VariableSet {
    /// Base variables, only normalized.
    #[serde(rename = "alpha")]
    Alpha,
    /// Base variables as density-ratio weak classifiers.
    #[serde(rename = "beta")]
    Beta,
    /// Base variables plus the five strongest derived ones.
    A,
    /// Set A plus four weaker derived variables.
    B,
    #[serde(rename = "custom")]
    Custom {
        variables: Vec<String>,
        #[serde(default)]
        derived: Vec<DerivedFormula>,
        #[serde(default = "default_true")]
        weak: bool,
    },
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FeatureConfig {
    pub variables: VariableSet,
    pub pca: bool,
    pub n_bins: usize,
    /// Transverse momentum used by the set-B `p_T` formulas.
    pub set_b_pt: String,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig { variables: VariableSet::Beta, pca: false, n_bins: DEFAULT_BINS, set_b_pt: "pt_l".into() }
    }
}

pub fn table1_variables() -> Vec<String> {
    crate::dataset::BASE_VARIABLES.iter().map(|s| s.to_string()).collect()
}

impl FeatureConfig {
    /// `(derived formulas, input variable names, use density-ratio weak classifiers)`
    pub fn resolve(&self) -> (Vec<DerivedFormula>, Vec<String>, bool) {
        let with = |derived: Vec<DerivedFormula>| {
            let mut names = table1_variables();
            names.extend(derived.iter().map(|f| f.name.clone()));
            (derived, names)
        };
        match &self.variables {
            VariableSet::Alpha => (Vec::new(), table1_variables(), false),
            VariableSet::Beta => (Vec::new(), table1_variables(), true),
            VariableSet::A => {
                let (d, n) = with(set_a_formulas());
                (d, n, true)
            }
            VariableSet::B => {
                let (d, n) = with(set_b_formulas(&self.set_b_pt));
                (d, n, true)
            }
            VariableSet::Custom { variables, derived, weak } => (derived.clone(), variables.clone(), *weak),
        }
    }
}

/// Fitted feature chain: derived variables, selection, optional PCA, then
/// weak classifiers. Every stage is fitted on the training sample only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeaturePipeline {
    pub derived: Vec<DerivedFormula>,
    pub inputs: Vec<String>,
    pub pca: Option<PcaTransform>,
    pub weak: WeakClassifierSet,
}

impl FeaturePipeline {
    pub fn fit(train: &Dataset, cfg: &FeatureConfig) -> Result<Self> {
        let (derived, inputs, weak_mode) = cfg.resolve();
        if inputs.is_empty() {
            return Err(Error::config("variable set is empty"));
        }
        let mut pipeline = FeaturePipeline {
            derived,
            inputs,
            pca: None,
            weak: WeakClassifierSet { mode: super::WeakMode::Normalized, variables: Vec::new() },
        };
        let selected = pipeline.select(train)?;
        let prepared = if cfg.pca {
            let rows: Vec<Vec<f64>> = selected.events.iter().map(|e| e.values.clone()).collect();
            let t = fit_pca(&rows)?;
            pipeline.pca = Some(t);
            pipeline.rotate(selected)?
        } else {
            selected
        };
        pipeline.weak = if weak_mode { weak_fit(&prepared, cfg.n_bins)? } else { normalize_fit(&prepared)? };
        Ok(pipeline)
    }

    /// Number of base weak classifiers.
    pub fn n_var(&self) -> usize {
        self.weak.len()
    }

    fn select(&self, d: &Dataset) -> Result<Dataset> {
        let missing: Vec<DerivedFormula> = self.derived.iter().filter(|f| d.column(&f.name).is_none()).cloned().collect();
        if missing.is_empty() {
            d.select(&self.inputs)
        } else {
            compute_derived(d, &missing)?.dataset.select(&self.inputs)
        }
    }

    fn rotate(&self, selected: Dataset) -> Result<Dataset> {
        let Some(t) = &self.pca else { return Ok(selected) };
        let schema = (0..t.dim()).map(|k| format!("pc{k}")).collect();
        let events = selected
            .events
            .into_iter()
            .map(|e| Ok(Event { values: t.project(&e.values)?, ..e }))
            .collect::<Result<Vec<_>>>()?;
        Ok(Dataset { schema, events })
    }

    /// Weak-classifier inputs for every event (after derived variables,
    /// selection and rotation).
    pub fn prepare(&self, d: &Dataset) -> Result<Dataset> {
        self.rotate(self.select(d)?)
    }

    /// `h_i(x)` for every event of `d`; one row per event.
    pub fn transform(&self, d: &Dataset) -> Result<Vec<Vec<f64>>> {
        self.weak.evaluate_dataset(&self.prepare(d)?)
    }

    pub fn transform_event(&self, schema: &[String], event: &Event) -> Result<Vec<f64>> {
        let d = Dataset { schema: schema.to_vec(), events: vec![event.clone()] };
        Ok(self.transform(&d)?.pop().expect("one event in, one row out"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{generate_synthetic, GeneratorSpec};
    use crate::features::WeakMode;

    #[test]
    fn presets_resolve_to_expected_sizes() {
        let size = |v: VariableSet| FeatureConfig { variables: v, ..Default::default() }.resolve().1.len();
        assert_eq!(size(VariableSet::Alpha), 12);
        assert_eq!(size(VariableSet::Beta), 12);
        assert_eq!(size(VariableSet::A), 17);
        assert_eq!(size(VariableSet::B), 21);
        assert!(!FeatureConfig { variables: VariableSet::Alpha, ..Default::default() }.resolve().2);
    }

    #[test]
    fn fit_and_transform_with_pca_on_set_a() {
        let d = generate_synthetic(&GeneratorSpec::stop_like(), 2000, 3).unwrap();
        let cfg = FeatureConfig { variables: VariableSet::A, pca: true, ..Default::default() };
        let p = FeaturePipeline::fit(&d, &cfg).unwrap();
        assert_eq!(p.n_var(), 17);
        assert_eq!(p.weak.mode, WeakMode::DensityRatio);
        assert_eq!(p.weak.names()[0], "pc0");
        let h = p.transform(&d).unwrap();
        assert_eq!(h.len(), d.len());
        assert!(h.iter().flatten().all(|v| v.abs() <= 1.0));
        assert_eq!(p.transform_event(&d.schema, &d.events[7]).unwrap(), h[7]);
    }

    #[test]
    fn pipeline_json_round_trip() {
        let d = generate_synthetic(&GeneratorSpec::stop_like(), 500, 3).unwrap();
        let cfg = FeatureConfig { variables: VariableSet::B, pca: true, n_bins: 10, ..Default::default() };
        let p = FeaturePipeline::fit(&d, &cfg).unwrap();
        let back: FeaturePipeline = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(p, back);
    }

    #[test]
    fn selector_serde_names() {
        let v: VariableSet = serde_json::from_str("\"alpha\"").unwrap();
        assert_eq!(v, VariableSet::Alpha);
        let v: VariableSet = serde_json::from_str("\"A\"").unwrap();
        assert_eq!(v, VariableSet::A);
        let v: VariableSet = serde_json::from_str(r#"{"custom":{"variables":["x0","x1"]}}"#).unwrap();
        assert!(matches!(v, VariableSet::Custom { weak: true, .. }));
    }
}
