use serde::{Deserialize, Serialize};

use super::event::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Comparator {
    #[serde(rename = "<")]
    Less,
    #[serde(rename = ">")]
    Greater,
    #[serde(rename = "<=")]
    LessEq,
    #[serde(rename = ">=")]
    GreaterEq,
    /// `|x| < threshold`
    #[serde(rename = "abs<")]
    AbsLess,
}

impl Comparator {
    pub fn holds(self, x: f64, threshold: f64) -> bool {
        match self {
            Comparator::Less => x < threshold,
            Comparator::Greater => x > threshold,
            Comparator::LessEq => x <= threshold,
            Comparator::GreaterEq => x >= threshold,
            Comparator::AbsLess => x.abs() < threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub variable: String,
    pub comparator: Comparator,
    pub threshold: f64,
}

/// `variable comparator threshold`, enforced only for events satisfying
/// `when` (always, if absent).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cut {
    pub variable: String,
    pub comparator: Comparator,
    pub threshold: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub when: Option<Condition>,
}

impl Cut {
    pub fn new(variable: &str, comparator: Comparator, threshold: f64) -> Self {
        Cut { variable: variable.into(), comparator, threshold, when: None }
    }

    pub fn when(mut self, variable: &str, comparator: Comparator, threshold: f64) -> Self {
        self.when = Some(Condition { variable: variable.into(), comparator, threshold });
        self
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CutSet {
    pub cuts: Vec<Cut>,
}

impl CutSet {
    /// Soft-lepton stop preselection:
    ///
    /// * missing transverse energy above 280 GeV;
    /// * leading jet with pT > 110 GeV and |η| < 2.4;
    /// * HT above 200 GeV;
    /// * muon pT > 3.5 GeV, |η| < 2.4, or electron pT > 5 GeV, |η| < 2.5;
    /// * veto on an additional lepton with pT > 20 GeV;
    /// * dijet azimuthal separation below 2.5 rad when a second jet has
    ///   pT > 60 GeV.
    pub fn default_preselection() -> Self {
        use Comparator::*;
        CutSet {
            cuts: vec![
                Cut::new("met", Greater, 280.0),
                Cut::new("pt_j1", Greater, 110.0),
                Cut::new("eta_j1", AbsLess, 2.4),
                Cut::new("ht", Greater, 200.0),
                Cut::new("pt_l", Greater, 3.5).when("lep_is_muon", Greater, 0.5),
                Cut::new("eta_l", AbsLess, 2.4).when("lep_is_muon", Greater, 0.5),
                Cut::new("pt_l", Greater, 5.0).when("lep_is_muon", Less, 0.5),
                Cut::new("eta_l", AbsLess, 2.5).when("lep_is_muon", Less, 0.5),
                Cut::new("pt_l2", LessEq, 20.0),
                Cut::new("dphi_j1j2", Less, 2.5).when("pt_j2", Greater, 60.0),
            ],
        }
    }

    fn validate(&self) -> Result<()> {
        for c in &self.cuts {
            let thresholds = std::iter::once(c.threshold).chain(c.when.as_ref().map(|w| w.threshold));
            if thresholds.into_iter().any(|t| !t.is_finite()) {
                return Err(Error::config(format!("cut on `{}` has a non-finite threshold", c.variable)));
            }
        }
        Ok(())
    }
}

struct Resolved {
    column: usize,
    comparator: Comparator,
    threshold: f64,
    when: Option<(usize, Comparator, f64)>,
}

/// Keeps the events passing every cut, in their original order.
pub fn apply_preselection(d: &Dataset, cuts: &CutSet) -> Result<Dataset> {
    cuts.validate()?;
    let resolved = cuts
        .cuts
        .iter()
        .map(|c| {
            let when = match &c.when {
                Some(w) => Some((d.require_column(&w.variable)?, w.comparator, w.threshold)),
                None => None,
            };
            Ok(Resolved { column: d.require_column(&c.variable)?, comparator: c.comparator, threshold: c.threshold, when })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(d.filter(|e| {
        resolved.iter().all(|r| {
            let applies = r.when.is_none_or(|(col, cmp, thr)| cmp.holds(e.values[col], thr));
            !applies || r.comparator.holds(e.values[r.column], r.threshold)
        })
    }))
}
