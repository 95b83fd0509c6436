use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fom::FomParams;
use super::scan::{fom_scan, ScanOptions};
use super::score::scored_classes;
use crate::dataset::SampleSplit;
use crate::error::{Error, Result};
use crate::features::FeaturePipeline;
use crate::rng::{derive_seed, purpose};
use crate::zoom::{run_qamlz, ZoomConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyReport {
    pub seeds: Vec<u64>,
    pub max_foms: Vec<f64>,
    pub mean: f64,
    /// Sample standard deviation (`n − 1`).
    pub std: f64,
}

impl UncertaintyReport {
    pub fn from_values(seeds: Vec<u64>, max_foms: Vec<f64>) -> Result<Self> {
        let n = max_foms.len();
        if n < 2 {
            return Err(Error::config("at least two runs are needed for a spread"));
        }
        let mean = max_foms.iter().sum::<f64>() / n as f64;
        let var = max_foms.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        Ok(UncertaintyReport { seeds, max_foms, mean, std: var.sqrt() })
    }
}

/// Trains `n_runs` models that differ only in seed and reports the spread of
/// their maximal FOMs on the assess sample.
pub fn run_uncertainty(
    split: &SampleSplit,
    pipeline: &FeaturePipeline,
    cfg: &ZoomConfig,
    n_runs: usize,
    params: &FomParams,
    opts: &ScanOptions,
) -> Result<UncertaintyReport> {
    if n_runs < 2 {
        return Err(Error::config("at least two runs are needed for a spread"));
    }
    let seeds: Vec<u64> = (0..n_runs as u64).map(|r| derive_seed(cfg.seed, &[purpose::RUN, r])).collect();
    let foms: Vec<f64> = seeds
        .par_iter()
        .map(|&seed| {
            let run_cfg = ZoomConfig { seed, ..cfg.clone() };
            let model = run_qamlz(&split.train, &split.test, pipeline, &run_cfg)?;
            let scores = model.score_dataset(&split.assess)?;
            let (s, b) = scored_classes(&split.assess, &scores);
            fom_scan(&s, &b, params, opts)?.best_fom()
        })
        .collect::<Result<_>>()?;
    UncertaintyReport::from_values(seeds, foms)
}
