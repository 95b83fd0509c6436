use std::borrow::Cow;
use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{TrainingWeights, ZoomConfig};
use super::flip::{flip_step, zoom_update, FlipContext};
use crate::dataset::{Dataset, Event};
use crate::error::{Error, Result};
use crate::features::FeaturePipeline;
use crate::ising::{
    apply_gauge, build_couplings, effective_problem, fix_variables, prune, ungauge, AugmentedClassifierSet,
    CouplingMatrices, GaugeVector,
};
use crate::rng::{derive_seed, keyed_rng, purpose};

/// A zoom centre with its training energy (mean weighted squared distance).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub mu: Vec<f64>,
    pub energy: f64,
    /// `H(t)` of the spins that produced this centre; zero for the start.
    pub ising_energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZoomState {
    pub t: usize,
    pub sigma: f64,
    /// Best first.
    pub candidates: Vec<Candidate>,
}

impl ZoomState {
    /// `μ = 0`, `t = 0`.
    pub fn initial(cm: &CouplingMatrices) -> Result<Self> {
        let mu = vec![0.0; cm.n];
        let energy = cm.mean_distance(&mu)?;
        Ok(ZoomState { t: 0, sigma: 1.0, candidates: vec![Candidate { mu, energy, ising_energy: 0.0 }] })
    }

    pub fn best(&self) -> &Candidate {
        &self.candidates[0]
    }
}

/// One line of the run log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub t: usize,
    pub sigma: f64,
    pub train_energy: f64,
    pub test_energy: Option<f64>,
    pub ising_energy: f64,
    pub candidates: usize,
    pub solves: usize,
    pub couplers: usize,
    pub fixed_spins: f64,
    pub broken_chain_fraction: f64,
}

struct SolveOutcome {
    candidate: Candidate,
    broken: f64,
    couplers: usize,
    fixed: usize,
}

fn solve_one(cm: &CouplingMatrices, cand: &Candidate, t: usize, k: usize, g: usize, cfg: &ZoomConfig) -> Result<SolveOutcome> {
    let sigma = cfg.sigma(t);
    let keys = [t as u64, k as u64, g as u64];
    let full = effective_problem(cm, &cand.mu, sigma, cfg.problem)?;
    let pruned = prune(&full, cfg.cutoff_pct)?;
    let couplers = pruned.n_couplers();
    let fixed = cfg.fixing.then(|| fix_variables(&pruned));
    let target = fixed.as_ref().map_or(&pruned, |f| &f.reduced);
    let gauge = GaugeVector::random(target.n, &mut keyed_rng(cfg.seed, &[purpose::GAUGE, keys[0], keys[1], keys[2]]));
    let gauged = apply_gauge(target, &gauge)?;
    let seed = derive_seed(cfg.seed, &[purpose::SOLVE, keys[0], keys[1], keys[2]]);
    let res = cfg.solver.solve(&gauged, t, seed)?;
    let best = res.best().ok_or_else(|| Error::External("solver returned no samples".into()))?;
    let mut s = ungauge(&best.spins, &gauge)?;
    if let Some(f) = &fixed {
        s = f.expand(&s)?;
    }
    let ctx = FlipContext { problem: &full, couplings: cm, mu_prev: &cand.mu, sigma };
    let mut rng = keyed_rng(cfg.seed, &[purpose::FLIP, keys[0], keys[1], keys[2]]);
    let s = flip_step(&ctx, cfg.flip_rule, &s, cfg.p_f(t), cfg.q_f(t), &mut rng)?;
    let mu = zoom_update(&cand.mu, &s, sigma)?;
    let energy = cm.mean_distance(&mu)?;
    let ising_energy = full.energy(&s)?;
    Ok(SolveOutcome {
        candidate: Candidate { mu, energy, ising_energy },
        broken: res.broken_chain_fraction,
        couplers,
        fixed: fixed.map_or(0, |f| f.n_fixed()),
    })
}

/// Advances the zoom by one iteration: every surviving candidate is solved
/// under `n_g(t)` gauges, each gauge contributing its best state, and the
/// pooled centres are deduplicated, windowed and capped at `n_e(t)`.
pub fn zoom_iteration(state: &ZoomState, cm: &CouplingMatrices, cfg: &ZoomConfig) -> Result<(ZoomState, IterationRecord)> {
    let t = state.t;
    let n_g = cfg.solver.schedule.gauges_at(t);
    let jobs: Vec<(usize, usize)> = (0..state.candidates.len()).flat_map(|k| (0..n_g).map(move |g| (k, g))).collect();
    let outcomes: Vec<SolveOutcome> = jobs
        .par_iter()
        .map(|&(k, g)| solve_one(cm, &state.candidates[k], t, k, g, cfg))
        .collect::<Result<_>>()?;
    let solves = outcomes.len();
    let broken = outcomes.iter().map(|o| o.broken).sum::<f64>() / solves as f64;
    let fixed = outcomes.iter().map(|o| o.fixed as f64).sum::<f64>() / solves as f64;
    let couplers = outcomes.iter().map(|o| o.couplers).max().unwrap_or(0);

    let mut pool: Vec<Candidate> = outcomes.into_iter().map(|o| o.candidate).collect();
    pool.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    let best = pool[0].energy;
    let limit = best + cfg.solver.schedule.window_at(t, best);
    let cap = cfg.solver.schedule.excited_at(t);
    let mut kept: Vec<Candidate> = Vec::new();
    for c in pool {
        if kept.len() >= cap || c.energy > limit {
            break;
        }
        if !kept.iter().any(|k| k.mu == c.mu) {
            kept.push(c);
        }
    }
    let record = IterationRecord {
        t,
        sigma: cfg.sigma(t),
        train_energy: kept[0].energy,
        test_energy: None,
        ising_energy: kept[0].ising_energy,
        candidates: kept.len(),
        solves,
        couplers,
        fixed_spins: fixed,
        broken_chain_fraction: broken,
    };
    Ok((ZoomState { t: t + 1, sigma: cfg.sigma(t + 1), candidates: kept }, record))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZoomOutcome {
    pub mu: Vec<f64>,
    pub trajectory: Vec<IterationRecord>,
}

/// Runs all iterations on precomputed coupling sums. Test sums, when
/// given, are only monitored.
pub fn run_zoom(train: &CouplingMatrices, test: Option<&CouplingMatrices>, cfg: &ZoomConfig) -> Result<ZoomOutcome> {
    cfg.validate()?;
    if let Some(te) = test {
        if te.n != train.n {
            return Err(Error::Dimension { expected: train.n, got: te.n });
        }
    }
    let mut state = ZoomState::initial(train)?;
    let mut trajectory = Vec::with_capacity(cfg.iterations);
    for _ in 0..cfg.iterations {
        let (next, mut record) = zoom_iteration(&state, train, cfg)?;
        if let Some(te) = test {
            record.test_energy = Some(te.mean_distance(&next.best().mu)?);
        }
        trajectory.push(record);
        state = next;
    }
    Ok(ZoomOutcome { mu: state.best().mu.clone(), trajectory })
}

fn weighted<'a>(d: &'a Dataset, mode: TrainingWeights) -> Cow<'a, Dataset> {
    match mode {
        TrainingWeights::Event => Cow::Borrowed(d),
        TrainingWeights::Unit => {
            let events = d.events.iter().map(|e| Event { weight: 1.0, ..e.clone() }).collect();
            Cow::Owned(Dataset { schema: d.schema.clone(), events })
        }
    }
}

/// Coupling sums of `d` under the model's feature chain and augmentation.
pub fn couplings_for(d: &Dataset, pipeline: &FeaturePipeline, aug: &AugmentedClassifierSet, mode: TrainingWeights) -> Result<CouplingMatrices> {
    let h = pipeline.transform(d)?;
    build_couplings(aug, &h, &weighted(d, mode))
}

/// Strong classifier `R(x) = Σ_I μ_I c_I(x)` with its feature chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub mu_final: Vec<f64>,
    pub augmentation: AugmentedClassifierSet,
    pub pipeline: FeaturePipeline,
    pub trajectory: Vec<IterationRecord>,
    pub config: ZoomConfig,
}

impl TrainedModel {
    /// Score from weak-classifier values `h`.
    pub fn score_weak(&self, h: &[f64]) -> Result<f64> {
        let c = self.augmentation.classify(h)?;
        Ok(c.iter().zip(&self.mu_final).map(|(c, m)| c * m).sum())
    }

    pub fn score_event(&self, schema: &[String], event: &Event) -> Result<f64> {
        self.score_weak(&self.pipeline.transform_event(schema, event)?)
    }

    pub fn score_dataset(&self, d: &Dataset) -> Result<Vec<f64>> {
        self.pipeline.transform(d)?.par_iter().map(|h| self.score_weak(h)).collect()
    }

    pub fn to_writer<W: Write>(&self, w: W) -> Result<()> {
        serde_json::to_writer_pretty(w, self)?;
        Ok(())
    }

    pub fn from_reader<R: Read>(r: R) -> Result<Self> {
        let m: TrainedModel = serde_json::from_reader(r)?;
        if m.mu_final.len() != m.augmentation.size() || m.augmentation.n_var != m.pipeline.n_var() {
            return Err(Error::Schema("model weights do not match its classifier set".into()));
        }
        Ok(m)
    }
}

/// Trains a strong classifier on `train`, monitoring `test`.
pub fn run_qamlz(train: &Dataset, test: &Dataset, pipeline: &FeaturePipeline, cfg: &ZoomConfig) -> Result<TrainedModel> {
    cfg.validate()?;
    if train.schema != test.schema {
        return Err(Error::Schema("train and test samples have different schemas".into()));
    }
    let aug = AugmentedClassifierSet::new(pipeline.n_var(), cfg.delta, cfg.range)?;
    let cm_train = couplings_for(train, pipeline, &aug, cfg.weights)?;
    let cm_test = if test.is_empty() { None } else { Some(couplings_for(test, pipeline, &aug, cfg.weights)?) };
    let out = run_zoom(&cm_train, cm_test.as_ref(), cfg)?;
    Ok(TrainedModel {
        mu_final: out.mu,
        augmentation: aug,
        pipeline: pipeline.clone(),
        trajectory: out.trajectory,
        config: cfg.clone(),
    })
}
