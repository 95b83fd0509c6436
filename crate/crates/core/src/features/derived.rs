//! Two-variable derived discriminants.

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Event};
use crate::error::{Error, Result};

/// Denominators smaller than this in magnitude make a ratio evaluate to 0.
pub const DIVISION_GUARD: f64 = 1e-9;

/// Closed forms over two inputs `a` and `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum Form {
    /// `a / b`
    Ratio,
    /// `(a − a0)(b − b0)`, optionally in absolute value.
    OffsetProduct { a0: f64, b0: f64, abs: bool },
    /// `a − b / divisor`
    MinusScaled { divisor: f64 },
    /// `a² / b`
    SquareOver,
    /// `a + coefficient · b²`
    PlusScaledSquare { coefficient: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivedFormula {
    pub name: String,
    pub a: String,
    pub b: String,
    #[serde(flatten)]
    pub form: Form,
}

impl DerivedFormula {
    pub fn new(name: &str, a: &str, b: &str, form: Form) -> Self {
        DerivedFormula { name: name.into(), a: a.into(), b: b.into(), form }
    }

    /// Evaluates the formula; the flag reports a guarded division.
    pub fn eval(&self, a: f64, b: f64) -> (f64, bool) {
        let guarded = |num: f64, den: f64| if den.abs() < DIVISION_GUARD { (0.0, true) } else { (num / den, false) };
        match self.form {
            Form::Ratio => guarded(a, b),
            Form::OffsetProduct { a0, b0, abs } => {
                let v = (a - a0) * (b - b0);
                (if abs { v.abs() } else { v }, false)
            }
            Form::MinusScaled { divisor } => {
                let (q, g) = guarded(b, divisor);
                (a - q, g)
            }
            Form::SquareOver => guarded(a * a, b),
            Form::PlusScaledSquare { coefficient } => (a + coefficient * b * b, false),
        }
    }
}

/// The five strongest derived variables (added to the base set in set A).
pub fn set_a_formulas() -> Vec<DerivedFormula> {
    vec![
        DerivedFormula::new("pt_l_over_met", "pt_l", "met", Form::Ratio),
        DerivedFormula::new("pt_l_over_pt_j1", "pt_l", "pt_j1", Form::Ratio),
        DerivedFormula::new("disc_b_m1_times_pt_b", "disc_b", "pt_b", Form::OffsetProduct { a0: 1.0, b0: 0.0, abs: false }),
        DerivedFormula::new("abs_met280_mt80", "met", "mt", Form::OffsetProduct { a0: 280.0, b0: 80.0, abs: true }),
        DerivedFormula::new("abs_met280_ht400", "met", "ht", Form::OffsetProduct { a0: 280.0, b0: 400.0, abs: true }),
    ]
}

/// The four weaker derived variables added on top of set A for set B.
///
/// `pt` names the transverse momentum used by the last two formulas; the
/// lepton pT (`pt_l`) is the default reading.
pub fn set_b_extra_formulas(pt: &str) -> Vec<DerivedFormula> {
    vec![
        DerivedFormula::new("dr_lb_minus_mt_over_40", "dr_lb", "mt", Form::MinusScaled { divisor: 40.0 }),
        DerivedFormula::new("ht2_over_njets", "ht", "njets", Form::SquareOver),
        DerivedFormula::new("pt_plus_3p5_eta_l2", pt, "eta_l", Form::PlusScaledSquare { coefficient: 3.5 }),
        DerivedFormula::new("pt_over_ht", pt, "ht", Form::Ratio),
    ]
}

pub fn set_b_formulas(pt: &str) -> Vec<DerivedFormula> {
    let mut f = set_a_formulas();
    f.extend(set_b_extra_formulas(pt));
    f
}

/// Outcome of [`compute_derived`].
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedOutput {
    pub dataset: Dataset,
    /// Number of evaluations whose denominator was guarded to give 0.
    pub guarded_divisions: usize,
}

/// Appends one column per formula.
pub fn compute_derived(d: &Dataset, formulas: &[DerivedFormula]) -> Result<DerivedOutput> {
    let cols = formulas
        .iter()
        .map(|f| Ok((d.require_column(&f.a)?, d.require_column(&f.b)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut schema = d.schema.clone();
    for f in formulas {
        if schema.contains(&f.name) {
            return Err(Error::Schema(format!("derived variable `{}` already in schema", f.name)));
        }
        schema.push(f.name.clone());
    }
    let mut guarded_divisions = 0;
    let events = d
        .events
        .iter()
        .map(|e| {
            let mut values = e.values.clone();
            for (f, &(ia, ib)) in formulas.iter().zip(&cols) {
                let (v, g) = f.eval(e.values[ia], e.values[ib]);
                guarded_divisions += g as usize;
                values.push(v);
            }
            Event { values, ..e.clone() }
        })
        .collect();
    Ok(DerivedOutput { dataset: Dataset { schema, events }, guarded_divisions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{generate_synthetic, GeneratorSpec, Process, Tag};

    fn one(pairs: &[(&str, f64)]) -> Dataset {
        Dataset::from_events(
            pairs.iter().map(|p| p.0.to_string()).collect(),
            vec![Event::new(pairs.iter().map(|p| p.1).collect(), Tag::Signal, 1.0, Process::Signal)],
        )
        .unwrap()
    }

    fn value(d: &Dataset, name: &str) -> f64 {
        d.events[0].values[d.column(name).unwrap()]
    }

    #[test]
    fn zero_factor_and_simple_ratio() {
        let d = one(&[("met", 280.0), ("mt", 123.0), ("pt_l", 30.0), ("ht", 500.0), ("pt_j1", 300.0), ("disc_b", 0.5), ("pt_b", 40.0)]);
        let out = compute_derived(&d, &set_a_formulas()).unwrap().dataset;
        assert_eq!(value(&out, "abs_met280_mt80"), 0.0);
        let d = one(&[("met", 300.0), ("mt", 1.0), ("pt_l", 30.0), ("ht", 1.0), ("pt_j1", 1.0), ("disc_b", 0.5), ("pt_b", 40.0)]);
        let out = compute_derived(&d, &set_a_formulas()).unwrap().dataset;
        assert_eq!(value(&out, "pt_l_over_met"), 0.1);
    }

    #[test]
    fn presets_match_hand_coded_expressions() {
        let spec = GeneratorSpec::stop_like();
        let d = generate_synthetic(&spec, 200, 6).unwrap();
        let out = compute_derived(&d, &set_b_formulas("pt_l")).unwrap();
        assert_eq!(out.guarded_divisions, 0);
        let o = &out.dataset;
        for (e, f) in d.events.iter().zip(&o.events) {
            let v = |n: &str| e.values[d.column(n).unwrap()];
            let g = |n: &str| f.values[o.column(n).unwrap()];
            assert_eq!(g("pt_l_over_met"), v("pt_l") / v("met"));
            assert_eq!(g("pt_l_over_pt_j1"), v("pt_l") / v("pt_j1"));
            assert_eq!(g("disc_b_m1_times_pt_b"), (v("disc_b") - 1.0) * v("pt_b"));
            assert_eq!(g("abs_met280_mt80"), ((v("met") - 280.0) * (v("mt") - 80.0)).abs());
            assert_eq!(g("abs_met280_ht400"), ((v("met") - 280.0) * (v("ht") - 400.0)).abs());
            assert_eq!(g("dr_lb_minus_mt_over_40"), v("dr_lb") - v("mt") / 40.0);
            assert_eq!(g("ht2_over_njets"), v("ht") * v("ht") / v("njets"));
            assert_eq!(g("pt_plus_3p5_eta_l2"), v("pt_l") + 3.5 * v("eta_l") * v("eta_l"));
            assert_eq!(g("pt_over_ht"), v("pt_l") / v("ht"));
        }
        assert_eq!(o.schema.len(), d.schema.len() + 9);
    }

    #[test]
    fn division_guard_counts() {
        let d = one(&[("ht", 100.0), ("njets", 0.0)]);
        let f = [DerivedFormula::new("q", "ht", "njets", Form::SquareOver)];
        let out = compute_derived(&d, &f).unwrap();
        assert_eq!(out.guarded_divisions, 1);
        assert_eq!(value(&out.dataset, "q"), 0.0);
    }

    #[test]
    fn missing_input_rejected() {
        let d = one(&[("ht", 100.0)]);
        assert!(compute_derived(&d, &set_a_formulas()).is_err());
    }

    #[test]
    fn formula_json_round_trip() {
        let f = set_b_formulas("pt_l");
        let text = serde_json::to_string(&f).unwrap();
        let back: Vec<DerivedFormula> = serde_json::from_str(&text).unwrap();
        assert_eq!(f, back);
    }
}
