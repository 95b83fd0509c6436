use crate::dataset::{Dataset, Event, Tag};
use crate::error::Result;
use crate::zoom::TrainedModel;

use super::scan::Scored;

/// `R(x) = Σ_I μ_I c_I(x)` for one event.
pub fn strong_score(model: &TrainedModel, schema: &[String], event: &Event) -> Result<f64> {
    model.score_event(schema, event)
}

/// `(score, weight)` per class, signal first.
pub fn scored_classes(d: &Dataset, scores: &[f64]) -> (Vec<Scored>, Vec<Scored>) {
    let mut sig = Vec::new();
    let mut bkg = Vec::new();
    for (e, &x) in d.events.iter().zip(scores) {
        match e.tag {
            Tag::Signal => sig.push((x, e.weight)),
            Tag::Background => bkg.push((x, e.weight)),
        }
    }
    (sig, bkg)
}
