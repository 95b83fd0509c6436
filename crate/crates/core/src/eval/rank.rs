use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fom::FomParams;
use super::scan::{fom_scan, ScanOptions};
use super::score::scored_classes;
use crate::dataset::Dataset;
use crate::error::Result;

/// Published single-variable maximal FOMs of the derived variables, keyed
/// by formula name, in the published order. Reference metadata only.
pub const DERIVED_REFERENCE_FOM: [(&str, f64); 9] = [
    ("pt_l_over_met", 0.35),
    ("pt_l_over_pt_j1", 0.22),
    ("disc_b_m1_times_pt_b", 0.20),
    ("abs_met280_mt80", 0.20),
    ("abs_met280_ht400", 0.18),
    ("dr_lb_minus_mt_over_40", 0.12),
    ("ht2_over_njets", 0.09),
    ("pt_plus_3p5_eta_l2", 0.08),
    ("pt_over_ht", 0.03),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CutDirection {
    Above,
    Below,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariableRank {
    pub variable: String,
    /// `None` when no cut passes the event floor in either direction.
    pub best_fom: Option<f64>,
    pub direction: CutDirection,
    pub cut: f64,
}

/// Scans every variable as a raw score in both cut directions and sorts by
/// the better maximal FOM, highest first.
pub fn rank_variables(d: &Dataset, variables: &[String], params: &FomParams, opts: &ScanOptions) -> Result<Vec<VariableRank>> {
    let cols = d.columns(variables)?;
    let mut ranks: Vec<VariableRank> = cols
        .par_iter()
        .zip(variables)
        .map(|(&c, name)| {
            let values: Vec<f64> = d.events.iter().map(|e| e.values[c]).collect();
            let mut best = VariableRank { variable: name.clone(), best_fom: None, direction: CutDirection::Above, cut: f64::NAN };
            for dir in [CutDirection::Above, CutDirection::Below] {
                let scores: Vec<f64> = match dir {
                    CutDirection::Above => values.clone(),
                    CutDirection::Below => values.iter().map(|x| -x).collect(),
                };
                let (s, b) = scored_classes(d, &scores);
                if s.is_empty() || b.is_empty() {
                    continue;
                }
                let curve = fom_scan(&s, &b, params, opts)?;
                if let Some(bc) = curve.best {
                    if best.best_fom.is_none_or(|f| bc.fom > f) {
                        let cut = if dir == CutDirection::Above { bc.cut } else { -bc.cut };
                        best = VariableRank { variable: name.clone(), best_fom: Some(bc.fom), direction: dir, cut };
                    }
                }
            }
            Ok(best)
        })
        .collect::<Result<_>>()?;
    ranks.sort_by(|a, b| {
        let key = |r: &VariableRank| r.best_fom.unwrap_or(f64::NEG_INFINITY);
        key(b).total_cmp(&key(a))
    });
    Ok(ranks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Event, Process, Tag};
    use crate::eval::fom;
    use crate::rng::keyed_rng;
    use rand::Rng;

    #[test]
    fn perfect_discriminant_ranks_first() {
        let mut rng = keyed_rng(4, &[]);
        let events: Vec<Event> = (0..2000)
            .map(|k| {
                let tag = if k % 5 < 2 { Tag::Signal } else { Tag::Background };
                let w = if tag == Tag::Signal { 0.5 } else { 5.0 };
                // "tag" equals the label, "noise" is unrelated, "flipped" is reversed
                Event::new(vec![tag.sign() + 0.1 * rng.random::<f64>(), rng.random::<f64>(), -tag.sign() + 0.1 * rng.random::<f64>()], tag, w, Process::Other)
            })
            .collect();
        let schema: Vec<String> = ["tag", "noise", "flipped"].iter().map(|s| s.to_string()).collect();
        let d = Dataset::from_events(schema.clone(), events).unwrap();
        let p = FomParams::default();
        let opts = ScanOptions::default();
        let r = rank_variables(&d, &schema, &p, &opts).unwrap();
        assert_eq!(r[2].variable, "noise");
        assert!(r[..2].iter().any(|x| x.variable == "tag" && x.direction == CutDirection::Above));
        assert!(r[..2].iter().any(|x| x.variable == "flipped" && x.direction == CutDirection::Below));
        // a perfect discriminant keeps all signal plus the few background
        // events the floor demands, bounded by keeping exactly 20
        let s_all = d.weight_sum(Tag::Signal);
        let base = fom(s_all, d.weight_sum(Tag::Background), &p).unwrap();
        let ceiling = fom(s_all, 20.0 * 5.0, &p).unwrap();
        assert!(r[2].best_fom.unwrap() < 1.5 * base);
        assert!(r[0].best_fom.unwrap() > 10.0 * base && r[0].best_fom.unwrap() <= ceiling);
    }

    #[test]
    fn reference_table_is_descending() {
        assert!(DERIVED_REFERENCE_FOM.windows(2).all(|w| w[0].1 >= w[1].1));
    }
}
