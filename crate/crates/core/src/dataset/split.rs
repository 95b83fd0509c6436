use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::event::{Dataset, Process};
use crate::error::{Error, Result};
use crate::rng::{keyed_rng, purpose};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SplitConfig {
    /// Share of the (non-reserved) events going to the QA sample; the QA
    /// sample is then halved into Train and Test.
    pub qa_fraction: f64,
    /// Processes whose events go only to the Assess sample, e.g. a signal
    /// point held out of training entirely.
    pub assess_only: Vec<Process>,
}

impl Default for SplitConfig {
    fn default() -> Self {
        SplitConfig { qa_fraction: 0.5, assess_only: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSplit {
    pub train: Dataset,
    pub test: Dataset,
    pub assess: Dataset,
    pub seed: u64,
}

/// Index form of [`split_samples`]: `(train, test, assess)`.
pub fn split_indices(d: &Dataset, cfg: &SplitConfig, seed: u64) -> Result<(Vec<usize>, Vec<usize>, Vec<usize>)> {
    if d.len() < 4 {
        return Err(Error::input(format!("need at least 4 events to split, got {}", d.len())));
    }
    if !(0.0..=1.0).contains(&cfg.qa_fraction) {
        return Err(Error::config(format!("qa_fraction must be in [0, 1], got {}", cfg.qa_fraction)));
    }
    let (mut pool, reserved): (Vec<usize>, Vec<usize>) =
        (0..d.len()).partition(|&i| !cfg.assess_only.contains(&d.events[i].process));
    pool.shuffle(&mut keyed_rng(seed, &[purpose::SPLIT]));

    let n_qa = (pool.len() as f64 * cfg.qa_fraction).round() as usize;
    let n_train = n_qa.div_ceil(2);
    let train = pool[..n_train].to_vec();
    let test = pool[n_train..n_qa].to_vec();
    let mut assess = pool[n_qa..].to_vec();
    assess.extend(reserved);
    Ok((train, test, assess))
}

/// Seeded shuffle, then contiguous slicing into Train, Test and Assess.
pub fn split_samples(d: &Dataset, cfg: &SplitConfig, seed: u64) -> Result<SampleSplit> {
    let (train, test, assess) = split_indices(d, cfg, seed)?;
    Ok(SampleSplit { train: d.subset(&train), test: d.subset(&test), assess: d.subset(&assess), seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{generate_synthetic, GeneratorSpec};
    use proptest::prelude::*;

    fn toy(n: usize, seed: u64) -> Dataset {
        generate_synthetic(&GeneratorSpec::separated_toy(2, 1.0), n, seed).unwrap()
    }

    #[test]
    fn eight_events_split_two_two_four() {
        let s = split_samples(&toy(8, 0), &SplitConfig::default(), 1).unwrap();
        assert_eq!((s.train.len(), s.test.len(), s.assess.len()), (2, 2, 4));
    }

    #[test]
    fn same_seed_same_split() {
        let d = toy(100, 0);
        let a = split_samples(&d, &SplitConfig::default(), 42).unwrap();
        let b = split_samples(&d, &SplitConfig::default(), 42).unwrap();
        assert_eq!(a, b);
        let c = split_samples(&d, &SplitConfig::default(), 43).unwrap();
        assert_ne!(a.train, c.train);
    }

    #[test]
    fn full_scale_sizes() {
        let d = toy(200_000, 3);
        let (tr, te, as_) = split_indices(&d, &SplitConfig::default(), 0).unwrap();
        assert_eq!((tr.len(), te.len(), as_.len()), (50_000, 50_000, 100_000));
    }

    #[test]
    fn reserved_processes_only_in_assess() {
        let d = toy(400, 5);
        let cfg = SplitConfig { qa_fraction: 0.5, assess_only: vec![Process::Ttbar] };
        let s = split_samples(&d, &cfg, 7).unwrap();
        assert!(s.train.events.iter().chain(&s.test.events).all(|e| e.process != Process::Ttbar));
        let n_tt = d.events.iter().filter(|e| e.process == Process::Ttbar).count();
        assert_eq!(s.assess.events.iter().filter(|e| e.process == Process::Ttbar).count(), n_tt);
    }

    #[test]
    fn too_small_rejected() {
        assert!(split_samples(&toy(4, 0).subset(&[0, 1, 2]), &SplitConfig::default(), 0).is_err());
    }

    proptest! {
        #[test]
        fn split_partitions_input(n in 4usize..300, seed in any::<u64>(), frac in 0.0f64..=1.0) {
            let d = toy(n, 1);
            let cfg = SplitConfig { qa_fraction: frac, assess_only: vec![] };
            let (tr, te, as_) = split_indices(&d, &cfg, seed).unwrap();
            let mut all: Vec<usize> = tr.iter().chain(&te).chain(&as_).copied().collect();
            all.sort_unstable();
            prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
            prop_assert!(tr.len().abs_diff(te.len()) <= 1);
        }
    }
}
