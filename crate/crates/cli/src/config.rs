use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use qamlz::dataset::{GeneratorSpec, SplitConfig};
use qamlz::eval::{FomParams, ScanOptions};
use qamlz::features::FeatureConfig;
use qamlz::zoom::ZoomConfig;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case")]
pub enum GeneratorChoice {
    StopLike,
    SeparatedToy { n_vars: usize, separation: f64 },
    Custom { spec: GeneratorSpec },
}

impl GeneratorChoice {
    pub fn spec(&self) -> GeneratorSpec {
        match self {
            GeneratorChoice::StopLike => GeneratorSpec::stop_like(),
            GeneratorChoice::SeparatedToy { n_vars, separation } => GeneratorSpec::separated_toy(*n_vars, *separation),
            GeneratorChoice::Custom { spec } => spec.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataConfig {
    /// Event CSV; when absent, events are generated.
    pub input: Option<PathBuf>,
    pub generator: GeneratorChoice,
    pub n_events: usize,
    /// Apply the default kinematic preselection before splitting.
    pub preselection: bool,
    pub split: SplitConfig,
    /// Rescale assess weights to these `[signal, background]` yields.
    pub assess_yields: Option<[f64; 2]>,
}

impl Default for DataConfig {
    fn default() -> Self {
        DataConfig {
            input: None,
            generator: GeneratorChoice::StopLike,
            n_events: 20_000,
            preselection: false,
            split: SplitConfig::default(),
            assess_yields: None,
        }
    }
}

/// Settings grid of the scan command; the product of all axes is run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridAxes {
    pub delta: Vec<f64>,
    pub range: Vec<usize>,
    pub cutoff_pct: Vec<f64>,
    pub fixing: Vec<bool>,
}

impl Default for GridAxes {
    fn default() -> Self {
        GridAxes { delta: vec![0.025], range: vec![3], cutoff_pct: vec![85.0], fixing: vec![false] }
    }
}

impl GridAxes {
    pub fn points(&self) -> Vec<GridPoint> {
        let mut out = Vec::new();
        for &delta in &self.delta {
            for &range in &self.range {
                for &cutoff_pct in &self.cutoff_pct {
                    for &fixing in &self.fixing {
                        out.push(GridPoint { delta, range, cutoff_pct, fixing });
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub delta: f64,
    pub range: usize,
    pub cutoff_pct: f64,
    pub fixing: bool,
}

/// The single JSON document driving every command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub data: DataConfig,
    pub output_dir: PathBuf,
    pub features: FeatureConfig,
    /// Its `seed` field is replaced by the top-level seed.
    pub zoom: ZoomConfig,
    pub fom: FomParams,
    pub cuts: ScanOptions,
    pub grid: GridAxes,
    /// Trainings per grid point in the scan.
    pub runs: usize,
    /// Maximum retained couplers; larger problems have no embedding.
    pub coupler_budget: Option<usize>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            data: DataConfig::default(),
            output_dir: PathBuf::from("qamlz-out"),
            features: FeatureConfig::default(),
            zoom: ZoomConfig::default(),
            fom: FomParams::default(),
            cuts: ScanOptions::default(),
            grid: GridAxes::default(),
            runs: 10,
            coupler_budget: Some(5600),
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let file = File::open(path).map_err(|e| CliError::Config(format!("cannot open {}: {e}", path.display())))?;
        serde_json::from_reader(BufReader::new(file)).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.data.input.is_none() && self.data.n_events == 0 {
            return Err(CliError::Config("n_events must be positive".into()));
        }
        if let Some([s, b]) = self.data.assess_yields {
            if !(s >= 0.0 && b > 0.0) {
                return Err(CliError::Config("assess yields must be non-negative with positive background".into()));
            }
        }
        let g = &self.grid;
        if g.delta.is_empty() || g.range.is_empty() || g.cutoff_pct.is_empty() || g.fixing.is_empty() {
            return Err(CliError::Config("grid axes must be non-empty".into()));
        }
        if self.runs == 0 {
            return Err(CliError::Config("runs must be at least 1".into()));
        }
        self.fom.validate()?;
        self.zoom_config().validate()?;
        Ok(())
    }

    pub fn zoom_config(&self) -> ZoomConfig {
        ZoomConfig { seed: self.seed, ..self.zoom.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let c = RunConfig::default();
        let text = serde_json::to_string(&c).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(c, back);
        c.validate().unwrap();
    }

    #[test]
    fn partial_documents_fill_defaults() {
        let c: RunConfig = serde_json::from_str(r#"{"seed": 7, "grid": {"cutoff_pct": [50, 85]}}"#).unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.grid.points().len(), 2);
        assert_eq!(c.zoom_config().seed, 7);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"sed": 7}"#).is_err());
    }

    #[test]
    fn grid_is_cartesian() {
        let g = GridAxes { delta: vec![0.01, 0.02], range: vec![1, 3], cutoff_pct: vec![50.0], fixing: vec![true, false] };
        let p = g.points();
        assert_eq!(p.len(), 8);
        assert_eq!(p[0], GridPoint { delta: 0.01, range: 1, cutoff_pct: 50.0, fixing: true });
        assert_eq!(p[7], GridPoint { delta: 0.02, range: 3, cutoff_pct: 50.0, fixing: false });
    }
}
