//! Iterative zoomed training of the strong classifier.

mod config;
mod flip;
mod train;

pub use config::{FlipRule, TrainingWeights, ZoomConfig};
pub use flip::{flip_step, zoom_update, FlipContext};
pub use train::{
    couplings_for, run_qamlz, run_zoom, zoom_iteration, Candidate, IterationRecord, TrainedModel, ZoomOutcome, ZoomState,
};
