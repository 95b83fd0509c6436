use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use qamlz::dataset::{apply_preselection, generate_synthetic, load_events_all, split_samples, write_events, CutSet, Dataset, SampleSplit, Tag};
use qamlz::eval::{
    auc, fom, fom_scan, overtraining_check, run_uncertainty, scored_classes, ClassKs, FomCurve, FomParams, BDT_REFERENCE_FOM,
};
use qamlz::features::FeaturePipeline;
use qamlz::ising::{retained_count, AugmentedClassifierSet};
use qamlz::zoom::{run_qamlz, TrainedModel, ZoomConfig};

use crate::config::{GridPoint, RunConfig};
use crate::error::{CliError, CliResult};

pub const MODEL_FILE: &str = "model.json";
pub const TRAIN_LOG_FILE: &str = "train_log.jsonl";
pub const EVENTS_FILE: &str = "events.csv";
pub const CURVE_CSV_FILE: &str = "fom_curve.csv";
pub const CURVE_JSON_FILE: &str = "fom_curve.json";
pub const OVERTRAINING_FILE: &str = "overtraining.json";
pub const SUMMARY_FILE: &str = "eval_summary.json";
pub const SCAN_FILE: &str = "scan.csv";

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::Data(format!("cannot create {}: {e}", dir.display())))?;
    }
    let f = File::create(path).map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))?;
    Ok(BufWriter::new(f))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::Data(e.to_string()))?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

/// Generated or loaded events, after the optional preselection.
pub fn load_data(cfg: &RunConfig) -> CliResult<Dataset> {
    let d = match &cfg.data.input {
        Some(path) => load_events_all(path)?,
        None => generate_synthetic(&cfg.data.generator.spec(), cfg.data.n_events, cfg.seed)?,
    };
    if cfg.data.preselection {
        return Ok(apply_preselection(&d, &CutSet::default_preselection())?);
    }
    Ok(d)
}

fn rescale(d: &mut Dataset, tag: Tag, target: f64) {
    let total = d.weight_sum(tag);
    if total > 0.0 {
        let k = target / total;
        d.events.iter_mut().filter(|e| e.tag == tag).for_each(|e| e.weight *= k);
    }
}

/// Train / test / assess partition used by every command.
pub fn prepare_split(cfg: &RunConfig) -> CliResult<SampleSplit> {
    let d = load_data(cfg)?;
    let mut split = split_samples(&d, &cfg.data.split, cfg.seed)?;
    if let Some([s, b]) = cfg.data.assess_yields {
        rescale(&mut split.assess, Tag::Signal, s);
        rescale(&mut split.assess, Tag::Background, b);
    }
    Ok(split)
}

pub fn cmd_gen(cfg: &RunConfig, out: Option<&Path>) -> CliResult<PathBuf> {
    cfg.validate()?;
    let path = out.map_or_else(|| cfg.output_dir.join(EVENTS_FILE), Path::to_path_buf);
    let d = load_data(cfg)?;
    let mut w = create(&path)?;
    write_events(&mut w, &d)?;
    w.flush()?;
    Ok(path)
}

pub struct TrainOutput {
    pub model: TrainedModel,
    pub model_path: PathBuf,
    pub log_path: PathBuf,
}

pub fn train_model(cfg: &RunConfig, split: &SampleSplit, zoom: &ZoomConfig) -> CliResult<TrainedModel> {
    let pipeline = FeaturePipeline::fit(&split.train, &cfg.features)?;
    Ok(run_qamlz(&split.train, &split.test, &pipeline, zoom)?)
}

pub fn cmd_train(cfg: &RunConfig) -> CliResult<TrainOutput> {
    cfg.validate()?;
    let split = prepare_split(cfg)?;
    let model = train_model(cfg, &split, &cfg.zoom_config())?;
    let model_path = cfg.output_dir.join(MODEL_FILE);
    let log_path = cfg.output_dir.join(TRAIN_LOG_FILE);
    let mut w = create(&model_path)?;
    model.to_writer(&mut w)?;
    w.write_all(b"\n")?;
    w.flush()?;
    let mut log = create(&log_path)?;
    for rec in &model.trajectory {
        serde_json::to_writer(&mut log, rec).map_err(|e| CliError::Data(e.to_string()))?;
        log.write_all(b"\n")?;
    }
    log.flush()?;
    Ok(TrainOutput { model, model_path, log_path })
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalSummary {
    pub n_assess: usize,
    pub signal_yield: f64,
    pub background_yield: f64,
    /// FOM with no cut applied.
    pub baseline_fom: f64,
    pub best_cut: Option<f64>,
    pub best_fom: Option<f64>,
    pub s_at_best: Option<f64>,
    pub b_at_best: Option<f64>,
    pub auc: f64,
    pub bdt_reference_fom: [f64; 2],
}

pub struct EvalOutput {
    pub curve: FomCurve,
    pub summary: EvalSummary,
    pub overtraining: Vec<ClassKs>,
}

pub fn evaluate(cfg: &RunConfig, model: &TrainedModel, split: &SampleSplit) -> CliResult<EvalOutput> {
    let scores = model.score_dataset(&split.assess)?;
    let (s, b) = scored_classes(&split.assess, &scores);
    let curve = fom_scan(&s, &b, &cfg.fom, &cfg.cuts)?;
    let (sy, by) = (split.assess.weight_sum(Tag::Signal), split.assess.weight_sum(Tag::Background));
    let best = curve.best;
    let summary = EvalSummary {
        n_assess: split.assess.len(),
        signal_yield: sy,
        background_yield: by,
        baseline_fom: fom(sy, by, &cfg.fom)?,
        best_cut: best.map(|b| b.cut),
        best_fom: best.map(|b| b.fom),
        s_at_best: best.map(|b| b.s),
        b_at_best: best.map(|b| b.b),
        auc: auc(&s, &b),
        bdt_reference_fom: [BDT_REFERENCE_FOM.0, BDT_REFERENCE_FOM.1],
    };
    let train_scores = model.score_dataset(&split.train)?;
    let test_scores = model.score_dataset(&split.test)?;
    let overtraining = overtraining_check(&split.train, &train_scores, &split.test, &test_scores)?;
    Ok(EvalOutput { curve, summary, overtraining })
}

pub fn load_model(path: &Path) -> CliResult<TrainedModel> {
    let f = File::open(path).map_err(|e| CliError::Data(format!("cannot open {}: {e}", path.display())))?;
    Ok(TrainedModel::from_reader(std::io::BufReader::new(f))?)
}

pub fn cmd_eval(cfg: &RunConfig, model_path: Option<&Path>) -> CliResult<EvalOutput> {
    cfg.validate()?;
    let path = model_path.map_or_else(|| cfg.output_dir.join(MODEL_FILE), Path::to_path_buf);
    let model = load_model(&path)?;
    let split = prepare_split(cfg)?;
    let out = evaluate(cfg, &model, &split)?;
    let mut w = create(&cfg.output_dir.join(CURVE_CSV_FILE))?;
    out.curve.write_csv(&mut w)?;
    w.flush()?;
    write_json(&cfg.output_dir.join(CURVE_JSON_FILE), &out.curve)?;
    write_json(&cfg.output_dir.join(OVERTRAINING_FILE), &out.overtraining)?;
    write_json(&cfg.output_dir.join(SUMMARY_FILE), &out.summary)?;
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub point: GridPoint,
    pub n_spins: usize,
    pub couplers: usize,
    pub status: String,
    pub mean_fom: Option<f64>,
    pub std_fom: Option<f64>,
}

fn scan_point(cfg: &RunConfig, split: &SampleSplit, pipeline: &FeaturePipeline, p: GridPoint) -> CliResult<ScanRow> {
    let aug = AugmentedClassifierSet::new(pipeline.n_var(), p.delta, p.range)?;
    let n_spins = aug.size();
    let couplers = retained_count(aug.n_couplers(), p.cutoff_pct);
    let mut row = ScanRow { point: p, n_spins, couplers, status: "ok".into(), mean_fom: None, std_fom: None };
    if cfg.coupler_budget.is_some_and(|b| couplers > b) {
        row.status = "no embedding".into();
        return Ok(row);
    }
    let zoom = ZoomConfig { delta: p.delta, range: p.range, cutoff_pct: p.cutoff_pct, fixing: p.fixing, ..cfg.zoom_config() };
    zoom.validate()?;
    let result = if cfg.runs == 1 {
        run_qamlz(&split.train, &split.test, pipeline, &zoom).and_then(|m| {
            let scores = m.score_dataset(&split.assess)?;
            let (s, b) = scored_classes(&split.assess, &scores);
            fom_scan(&s, &b, &cfg.fom, &cfg.cuts)?.best_fom().map(|f| (f, None))
        })
    } else {
        run_uncertainty(split, pipeline, &zoom, cfg.runs, &cfg.fom, &cfg.cuts).map(|r| (r.mean, Some(r.std)))
    };
    match result {
        Ok((mean, std)) => {
            row.mean_fom = Some(mean);
            row.std_fom = std;
        }
        Err(qamlz::Error::NoValidCut) => row.status = "no valid cut".into(),
        Err(e) => return Err(e.into()),
    }
    Ok(row)
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

pub fn write_scan_csv<W: Write>(w: W, rows: &[ScanRow]) -> CliResult<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["delta", "range", "cutoff_pct", "fixing", "n_spins", "couplers", "status", "mean_fom", "std_fom"])?;
    for r in rows {
        out.write_record([
            r.point.delta.to_string(),
            r.point.range.to_string(),
            r.point.cutoff_pct.to_string(),
            r.point.fixing.to_string(),
            r.n_spins.to_string(),
            r.couplers.to_string(),
            r.status.clone(),
            opt(r.mean_fom),
            opt(r.std_fom),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Runs every grid point and writes all rows, in grid order, before
/// reporting infeasible points.
pub fn cmd_scan(cfg: &RunConfig) -> CliResult<Vec<ScanRow>> {
    cfg.validate()?;
    let split = prepare_split(cfg)?;
    let pipeline = FeaturePipeline::fit(&split.train, &cfg.features)?;
    let rows: Vec<ScanRow> = cfg
        .grid
        .points()
        .into_par_iter()
        .map(|p| scan_point(cfg, &split, &pipeline, p))
        .collect::<CliResult<_>>()?;
    let mut w = create(&cfg.output_dir.join(SCAN_FILE))?;
    write_scan_csv(&mut w, &rows)?;
    w.flush()?;
    let infeasible = rows.iter().filter(|r| r.status == "no embedding").count();
    if infeasible > 0 {
        return Err(CliError::Infeasible(infeasible));
    }
    Ok(rows)
}

/// FOM table over the product of signal yields, background yields and
/// relative uncertainties, with the `f = 0.2` value alongside.
pub fn write_fom_table<W: Write>(w: W, signal: &[f64], background: &[f64], f: &[f64]) -> CliResult<()> {
    let reference = FomParams::default();
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["S", "B", "f", "fom", "fom_f0.2"])?;
    for &b in background {
        for &s in signal {
            let fref = fom(s, b, &reference)?;
            for &fv in f {
                let v = fom(s, b, &FomParams::with_f(fv))?;
                out.write_record([s.to_string(), b.to_string(), fv.to_string(), v.to_string(), fref.to_string()])?;
            }
        }
    }
    out.flush()?;
    Ok(())
}
