use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::event::{Dataset, Event, Process, Tag};
use crate::error::{Error, Result};
use crate::rng::{keyed_rng, purpose};

/// Attempts at drawing a vector inside the truncation box before the last
/// draw is clamped into it.
const MAX_REJECTIONS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VariableKind {
    #[default]
    Continuous,
    /// Rounded to the nearest integer (multiplicities).
    Integer,
    /// Mapped to ±1 (charges); zero maps to +1.
    Sign,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariableSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<f64>,
    #[serde(default)]
    pub kind: VariableKind,
}

impl VariableSpec {
    pub fn continuous(name: &str) -> Self {
        VariableSpec { name: name.into(), lower: None, upper: None, kind: VariableKind::Continuous }
    }

    fn bounded(name: &str, lower: Option<f64>, upper: Option<f64>, kind: VariableKind) -> Self {
        VariableSpec { name: name.into(), lower, upper, kind }
    }

    fn contains(&self, x: f64) -> bool {
        self.lower.is_none_or(|lo| x >= lo) && self.upper.is_none_or(|hi| x <= hi)
    }

    fn clamp(&self, mut x: f64) -> f64 {
        if let Some(lo) = self.lower {
            x = x.max(lo);
        }
        if let Some(hi) = self.upper {
            x = x.min(hi);
        }
        x
    }

    fn discretize(&self, x: f64) -> f64 {
        match self.kind {
            VariableKind::Continuous => x,
            VariableKind::Integer => x.round(),
            VariableKind::Sign => {
                if x >= 0.0 {
                    1.0
                } else {
                    -1.0
                }
            }
        }
    }
}

/// One multivariate Gaussian over the schema variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub mean: Vec<f64>,
    pub covariance: Vec<Vec<f64>>,
}

impl Component {
    /// Independent variables with the given standard deviations.
    pub fn diagonal(mean: Vec<f64>, std: &[f64]) -> Self {
        let n = mean.len();
        let mut covariance = vec![vec![0.0; n]; n];
        for (i, s) in std.iter().enumerate() {
            covariance[i][i] = s * s;
        }
        Component { mean, covariance }
    }

    /// Covariance assembled from standard deviations and a list of
    /// `(i, j, correlation)` entries.
    pub fn correlated(mean: Vec<f64>, std: &[f64], correlations: &[(usize, usize, f64)]) -> Self {
        let mut c = Component::diagonal(mean, std);
        for &(i, j, rho) in correlations {
            let v = rho * std[i] * std[j];
            c.covariance[i][j] = v;
            c.covariance[j][i] = v;
        }
        c
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BackgroundComponent {
    pub process: Process,
    pub fraction: f64,
    #[serde(flatten)]
    pub component: Component,
}

/// Truncated Gaussian mixture describing signal and background processes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub variables: Vec<VariableSpec>,
    /// Probability that a generated event is signal.
    pub signal_fraction: f64,
    /// Total expected signal yield shared among the generated signal events.
    pub signal_yield: f64,
    pub background_yield: f64,
    pub signal: Component,
    pub backgrounds: Vec<BackgroundComponent>,
}

/// Lower-triangular-ish factor `F` with `F Fᵀ = Σ`, valid for singular
/// positive semi-definite covariances.
struct Sampler {
    mean: Vec<f64>,
    factor: DMatrix<f64>,
}

impl Sampler {
    fn new(c: &Component, n: usize, label: &str) -> Result<Self> {
        if c.mean.len() != n || c.covariance.len() != n || c.covariance.iter().any(|r| r.len() != n) {
            return Err(Error::config(format!("{label}: mean/covariance must have dimension {n}")));
        }
        if c.mean.iter().chain(c.covariance.iter().flatten()).any(|v| !v.is_finite()) {
            return Err(Error::config(format!("{label}: non-finite mean or covariance entry")));
        }
        let cov = DMatrix::from_fn(n, n, |i, j| c.covariance[i][j]);
        let scale = cov.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
        for i in 0..n {
            for j in 0..i {
                if (cov[(i, j)] - cov[(j, i)]).abs() > 1e-12 * scale {
                    return Err(Error::config(format!("{label}: covariance is not symmetric at ({i},{j})")));
                }
            }
        }
        let eig = SymmetricEigen::new(cov);
        let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -1e-10 * scale {
            return Err(Error::config(format!(
                "{label}: covariance is not positive semi-definite (eigenvalue {min:e})"
            )));
        }
        let roots = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
        let factor = &eig.eigenvectors * DMatrix::from_diagonal(&roots);
        Ok(Sampler { mean: c.mean.clone(), factor })
    }

    fn draw<R: Rng>(&self, vars: &[VariableSpec], rng: &mut R) -> Vec<f64> {
        let n = self.mean.len();
        let mut x = vec![0.0; n];
        for attempt in 0..MAX_REJECTIONS {
            let z: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
            for (i, xi) in x.iter_mut().enumerate() {
                let mut v = self.mean[i];
                for (k, zk) in z.iter().enumerate() {
                    v += self.factor[(i, k)] * zk;
                }
                *xi = vars[i].discretize(v);
            }
            if x.iter().zip(vars).all(|(v, s)| s.contains(*v)) {
                return x;
            }
            if attempt + 1 == MAX_REJECTIONS {
                break;
            }
        }
        x.iter().zip(vars).map(|(v, s)| s.discretize(s.clamp(*v))).collect()
    }
}

impl GeneratorSpec {
    pub fn schema(&self) -> Vec<String> {
        self.variables.iter().map(|v| v.name.clone()).collect()
    }

    pub fn validate(&self) -> Result<()> {
        self.samplers().map(|_| ())
    }

    fn samplers(&self) -> Result<(Sampler, Vec<(Process, f64, Sampler)>)> {
        let n = self.variables.len();
        if n == 0 {
            return Err(Error::config("generator needs at least one variable"));
        }
        for v in &self.variables {
            if let (Some(lo), Some(hi)) = (v.lower, v.upper) {
                if !(lo <= hi) {
                    return Err(Error::config(format!("variable `{}`: lower bound above upper bound", v.name)));
                }
            }
        }
        if !(self.signal_fraction > 0.0 && self.signal_fraction < 1.0) {
            return Err(Error::config(format!(
                "signal_fraction must lie strictly between 0 and 1, got {} (a class would have zero probability)",
                self.signal_fraction
            )));
        }
        if !(self.signal_yield >= 0.0 && self.background_yield >= 0.0) {
            return Err(Error::config("yields must be non-negative"));
        }
        if self.backgrounds.is_empty() {
            return Err(Error::config("at least one background component is required"));
        }
        let total: f64 = self.backgrounds.iter().map(|b| b.fraction).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::config(format!("background mixture fractions sum to {total}, expected 1")));
        }
        let signal = Sampler::new(&self.signal, n, "signal")?;
        let mut bkg = Vec::with_capacity(self.backgrounds.len());
        for b in &self.backgrounds {
            if !(b.fraction > 0.0) {
                return Err(Error::config(format!("background `{}` has zero probability", b.process)));
            }
            if b.process == Process::Signal {
                return Err(Error::config("background component cannot use the signal process"));
            }
            bkg.push((b.process, b.fraction, Sampler::new(&b.component, n, b.process.as_str())?));
        }
        Ok((signal, bkg))
    }

    /// Stop-like preset over the twelve base variables and the preselection
    /// kinematics, with a soft-lepton signal against W+jets and ttbar.
    pub fn stop_like() -> Self {
        use VariableKind::*;
        let variables = vec![
            VariableSpec::bounded("pt_l", Some(3.5), None, Continuous),
            VariableSpec::bounded("eta_l", Some(-2.5), Some(2.5), Continuous),
            VariableSpec::bounded("q_l", None, None, Sign),
            VariableSpec::bounded("met", Some(150.0), None, Continuous),
            VariableSpec::bounded("mt", Some(0.0), None, Continuous),
            VariableSpec::bounded("njets", Some(1.0), None, Integer),
            VariableSpec::bounded("pt_j1", Some(60.0), None, Continuous),
            VariableSpec::bounded("ht", Some(100.0), None, Continuous),
            VariableSpec::bounded("disc_b", Some(0.0), Some(1.0), Continuous),
            VariableSpec::bounded("nb", Some(0.0), None, Integer),
            VariableSpec::bounded("pt_b", Some(20.0), None, Continuous),
            VariableSpec::bounded("dr_lb", Some(0.0), Some(5.0), Continuous),
            VariableSpec::bounded("eta_j1", Some(-4.7), Some(4.7), Continuous),
            VariableSpec::bounded("lep_is_muon", Some(0.0), Some(1.0), Integer),
            VariableSpec::bounded("pt_l2", Some(0.0), None, Continuous),
            VariableSpec::bounded("pt_j2", Some(0.0), None, Continuous),
            VariableSpec::bounded("dphi_j1j2", Some(0.0), Some(std::f64::consts::PI), Continuous),
        ];
        // met-ht, met-pt_j1, pt_j1-ht, njets-ht, pt_l-mt, disc_b-nb, pt_b-ht
        let corr = [(3, 7, 0.4), (3, 6, 0.5), (6, 7, 0.7), (5, 7, 0.5), (0, 4, 0.4), (8, 9, 0.6), (10, 7, 0.3)];
        let signal = Component::correlated(
            vec![14.0, 0.0, 0.0, 340.0, 55.0, 2.5, 360.0, 460.0, 0.45, 0.6, 45.0, 1.6, 0.0, 0.5, 2.0, 90.0, 1.7],
            &[9.0, 1.1, 1.0, 60.0, 30.0, 1.2, 80.0, 120.0, 0.3, 0.7, 30.0, 0.8, 1.2, 0.5, 5.0, 50.0, 0.8],
            &corr,
        );
        let wjets = Component::correlated(
            vec![45.0, 0.0, 0.2, 310.0, 85.0, 2.0, 320.0, 380.0, 0.2, 0.2, 65.0, 2.5, 0.0, 0.5, 2.0, 70.0, 2.0],
            &[28.0, 1.2, 1.0, 50.0, 40.0, 1.0, 80.0, 120.0, 0.2, 0.5, 40.0, 0.9, 1.3, 0.5, 5.0, 45.0, 0.8],
            &corr,
        );
        let ttbar = Component::correlated(
            vec![50.0, 0.0, 0.0, 305.0, 110.0, 4.0, 290.0, 510.0, 0.75, 1.5, 85.0, 2.2, 0.0, 0.5, 8.0, 110.0, 1.9],
            &[32.0, 1.1, 1.0, 50.0, 50.0, 1.3, 80.0, 150.0, 0.2, 0.8, 50.0, 0.9, 1.2, 0.5, 15.0, 55.0, 0.8],
            &corr,
        );
        GeneratorSpec {
            variables,
            signal_fraction: 0.4,
            signal_yield: 7000.0,
            background_yield: 200_000.0,
            signal,
            backgrounds: vec![
                BackgroundComponent { process: Process::Wjets, fraction: 0.5, component: wjets },
                BackgroundComponent { process: Process::Ttbar, fraction: 0.5, component: ttbar },
            ],
        }
    }

    /// Toy with `n_vars` independent unit-variance variables `x0, x1, ...`;
    /// signal is centred at `+separation/2` and background at
    /// `-separation/2` in every variable.
    pub fn separated_toy(n_vars: usize, separation: f64) -> Self {
        let variables = (0..n_vars).map(|i| VariableSpec::continuous(&format!("x{i}"))).collect();
        let ones = vec![1.0; n_vars];
        GeneratorSpec {
            variables,
            signal_fraction: 0.4,
            signal_yield: 7000.0,
            background_yield: 200_000.0,
            signal: Component::diagonal(vec![separation / 2.0; n_vars], &ones),
            backgrounds: vec![
                BackgroundComponent {
                    process: Process::Wjets,
                    fraction: 0.5,
                    component: Component::diagonal(vec![-separation / 2.0; n_vars], &ones),
                },
                BackgroundComponent {
                    process: Process::Ttbar,
                    fraction: 0.5,
                    component: Component::diagonal(vec![-separation / 2.0; n_vars], &ones),
                },
            ],
        }
    }
}

/// Draws `n_events` events. Event `i` uses its own random stream keyed by
/// `(seed, i)`, so the output does not depend on thread scheduling.
pub fn generate_synthetic(spec: &GeneratorSpec, n_events: usize, seed: u64) -> Result<Dataset> {
    if n_events == 0 {
        return Err(Error::config("n_events must be positive"));
    }
    let (signal, backgrounds) = spec.samplers()?;
    let vars = &spec.variables;
    let mut events: Vec<Event> = (0..n_events)
        .into_par_iter()
        .map(|i| {
            let mut rng = keyed_rng(seed, &[purpose::EVENT, i as u64]);
            let u: f64 = rng.random();
            let (tag, process, sampler) = if u < spec.signal_fraction {
                (Tag::Signal, Process::Signal, &signal)
            } else {
                let v: f64 = rng.random();
                let mut acc = 0.0;
                let mut pick = backgrounds.last().expect("validated non-empty");
                for b in &backgrounds {
                    acc += b.1;
                    if v < acc {
                        pick = b;
                        break;
                    }
                }
                (Tag::Background, pick.0, &pick.2)
            };
            Event::new(sampler.draw(vars, &mut rng), tag, 0.0, process)
        })
        .collect();

    let n_sig = events.iter().filter(|e| e.tag == Tag::Signal).count();
    let n_bkg = events.len() - n_sig;
    let w_sig = if n_sig > 0 { spec.signal_yield / n_sig as f64 } else { 0.0 };
    let w_bkg = if n_bkg > 0 { spec.background_yield / n_bkg as f64 } else { 0.0 };
    for e in &mut events {
        e.weight = match e.tag {
            Tag::Signal => w_sig,
            Tag::Background => w_bkg,
        };
    }
    Ok(Dataset { schema: spec.schema(), events })
}
