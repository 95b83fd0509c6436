use std::io::Write;

use serde::{Deserialize, Serialize};

use super::fom::{fom, FomParams};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CutGrid {
    /// Evenly spaced points spanning the pooled score range.
    Uniform(usize),
    Explicit(Vec<f64>),
}

impl Default for CutGrid {
    fn default() -> Self {
        CutGrid::Uniform(201)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScanOptions {
    pub grid: CutGrid,
    /// Minimum surviving unweighted events per class for a cut to count.
    pub min_events: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { grid: CutGrid::default(), min_events: 20 }
    }
}

/// Score and weight of one event.
pub type Scored = (f64, f64);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BestCut {
    pub index: usize,
    pub cut: f64,
    pub fom: f64,
    pub s: f64,
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FomCurve {
    pub cuts: Vec<f64>,
    /// Zero where `B = 0`.
    pub fom_values: Vec<f64>,
    pub s: Vec<f64>,
    pub b: Vec<f64>,
    pub n_signal: Vec<usize>,
    pub n_background: Vec<usize>,
    pub valid: Vec<bool>,
    pub best: Option<BestCut>,
    pub params: FomParams,
}

impl FomCurve {
    pub fn best(&self) -> Result<&BestCut> {
        self.best.as_ref().ok_or(Error::NoValidCut)
    }

    pub fn best_fom(&self) -> Result<f64> {
        self.best().map(|b| b.fom)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["cut", "fom", "S", "B", "n_signal", "n_background", "valid"])?;
        for k in 0..self.cuts.len() {
            out.write_record([
                self.cuts[k].to_string(),
                self.fom_values[k].to_string(),
                self.s[k].to_string(),
                self.b[k].to_string(),
                self.n_signal[k].to_string(),
                self.n_background[k].to_string(),
                self.valid[k].to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, w: W) -> Result<()> {
        serde_json::to_writer_pretty(w, self)?;
        Ok(())
    }
}

fn grid_points(grid: &CutGrid, signal: &[Scored], background: &[Scored]) -> Result<Vec<f64>> {
    match grid {
        CutGrid::Explicit(v) => {
            if v.is_empty() || v.iter().any(|c| !c.is_finite()) || v.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::config("explicit cut grid must be finite and strictly ascending"));
            }
            Ok(v.clone())
        }
        CutGrid::Uniform(n) => {
            if *n < 2 {
                return Err(Error::config("uniform cut grid needs at least two points"));
            }
            let (lo, hi) = signal
                .iter()
                .chain(background)
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(x, _)| (lo.min(x), hi.max(x)));
            if lo == hi {
                return Ok(vec![lo]);
            }
            let step = (hi - lo) / (*n - 1) as f64;
            Ok((0..*n).map(|k| if k == n - 1 { hi } else { lo + step * k as f64 }).collect())
        }
    }
}

/// Surviving yield and count above each cut, for one class.
fn tail_sums(sample: &[Scored], cuts: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut sorted = sample.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    // suffix[k] = Σ weights of sorted[k..]
    let mut suffix = vec![0.0; sorted.len() + 1];
    for k in (0..sorted.len()).rev() {
        suffix[k] = suffix[k + 1] + sorted[k].1;
    }
    cuts.iter()
        .map(|&c| {
            let first = sorted.partition_point(|&(x, _)| x <= c);
            (suffix[first], sorted.len() - first)
        })
        .unzip()
}

/// FOM for the selection `score > cut` at every cut of the grid.
pub fn fom_scan(signal: &[Scored], background: &[Scored], params: &FomParams, opts: &ScanOptions) -> Result<FomCurve> {
    params.validate()?;
    if signal.is_empty() || background.is_empty() {
        return Err(Error::input("both classes need at least one scored event"));
    }
    if signal.iter().chain(background).any(|&(x, w)| !x.is_finite() || !(w >= 0.0 && w.is_finite())) {
        return Err(Error::input("scores must be finite and weights non-negative"));
    }
    let cuts = grid_points(&opts.grid, signal, background)?;
    let (s, n_signal) = tail_sums(signal, &cuts);
    let (b, n_background) = tail_sums(background, &cuts);
    let mut fom_values = Vec::with_capacity(cuts.len());
    let mut valid = Vec::with_capacity(cuts.len());
    let mut best: Option<BestCut> = None;
    for k in 0..cuts.len() {
        let v = if b[k] > 0.0 { fom(s[k], b[k], params)? } else { 0.0 };
        let ok = b[k] > 0.0 && n_signal[k] >= opts.min_events && n_background[k] >= opts.min_events;
        if ok && best.is_none_or(|bc| v > bc.fom) {
            best = Some(BestCut { index: k, cut: cuts[k], fom: v, s: s[k], b: b[k] });
        }
        fom_values.push(v);
        valid.push(ok);
    }
    Ok(FomCurve { cuts, fom_values, s, b, n_signal, n_background, valid, best, params: params.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::keyed_rng;
    use rand::Rng;
    use rand_distr::{Distribution, Normal};

    fn sample(n: usize, mean: f64, w: f64, seed: u64) -> Vec<Scored> {
        let mut rng = keyed_rng(seed, &[]);
        let d = Normal::new(mean, 1.0).unwrap();
        (0..n).map(|_| (d.sample(&mut rng), w * rng.random_range(0.5..1.5))).collect()
    }

    #[test]
    fn matches_per_cut_oracle() {
        let sig = sample(400, 1.0, 0.5, 1);
        let bkg = sample(600, -0.5, 3.0, 2);
        let p = FomParams::default();
        let curve = fom_scan(&sig, &bkg, &p, &ScanOptions { grid: CutGrid::Uniform(101), min_events: 20 }).unwrap();
        assert_eq!(curve.cuts.len(), 101);
        for (k, &c) in curve.cuts.iter().enumerate() {
            let s: f64 = sig.iter().filter(|x| x.0 > c).map(|x| x.1).sum();
            let b: f64 = bkg.iter().filter(|x| x.0 > c).map(|x| x.1).sum();
            let ns = sig.iter().filter(|x| x.0 > c).count();
            let nb = bkg.iter().filter(|x| x.0 > c).count();
            assert!((curve.s[k] - s).abs() <= 1e-9 * s.max(1.0));
            assert!((curve.b[k] - b).abs() <= 1e-9 * b.max(1.0));
            assert_eq!((curve.n_signal[k], curve.n_background[k]), (ns, nb));
            if b > 0.0 {
                let want = fom(s, b, &p).unwrap();
                assert!((curve.fom_values[k] - want).abs() <= 1e-9 * want.max(1e-12));
            }
            assert_eq!(curve.valid[k], ns >= 20 && nb >= 20);
        }
        let best = curve.best().unwrap();
        assert_eq!(fom(best.s, best.b, &p).unwrap(), best.fom);
        let max_valid = curve.fom_values.iter().zip(&curve.valid).filter(|(_, v)| **v).map(|(f, _)| *f).fold(0.0, f64::max);
        assert_eq!(best.fom, max_valid);
    }

    #[test]
    fn separated_scores_cut_in_the_gap() {
        let sig: Vec<Scored> = (0..50).map(|k| (1.0 + k as f64 * 0.01, 1.0)).collect();
        let bkg: Vec<Scored> = (0..500).map(|k| (-1.0 - k as f64 * 0.01, 1.0)).collect();
        let curve = fom_scan(&sig, &bkg, &FomParams::default(), &ScanOptions { grid: CutGrid::Uniform(201), min_events: 0 }).unwrap();
        // B = 0 cuts are never eligible, so the best cut keeps background
        let best = curve.best().unwrap();
        assert!(best.b > 0.0);
        assert_eq!(best.s, 50.0);
        assert!(curve.b.iter().zip(&curve.fom_values).all(|(b, f)| *b > 0.0 || *f == 0.0));
        // the best eligible cut sits just below the gap, keeping a handful of
        // the highest background events
        assert!(best.cut < -1.0 && best.b <= 5.0);
    }

    #[test]
    fn no_valid_cut_is_reported() {
        let sig = sample(5, 0.0, 1.0, 3);
        let bkg = sample(5, 0.0, 1.0, 4);
        let curve = fom_scan(&sig, &bkg, &FomParams::default(), &ScanOptions::default()).unwrap();
        assert!(curve.best.is_none());
        assert!(matches!(curve.best(), Err(Error::NoValidCut)));
        assert!(fom_scan(&[], &bkg, &FomParams::default(), &ScanOptions::default()).is_err());
    }

    #[test]
    fn uninformative_score_peaks_near_no_cut() {
        let sig = sample(4000, 0.0, 0.05, 5);
        let bkg = sample(6000, 0.0, 1.0, 6);
        let p = FomParams::default();
        let curve = fom_scan(&sig, &bkg, &p, &ScanOptions::default()).unwrap();
        let s0: f64 = sig.iter().map(|x| x.1).sum();
        let b0: f64 = bkg.iter().map(|x| x.1).sum();
        let base = fom(s0, b0, &p).unwrap();
        // a random cut can only trade yield for noise; gains stay small
        assert!(curve.best_fom().unwrap() < 1.5 * base, "{} vs {base}", curve.best_fom().unwrap());
    }

    #[test]
    fn csv_round_trip() {
        let sig = sample(100, 1.0, 1.0, 7);
        let bkg = sample(100, -1.0, 1.0, 8);
        let p = FomParams::default();
        let curve = fom_scan(&sig, &bkg, &p, &ScanOptions { grid: CutGrid::Uniform(11), min_events: 1 }).unwrap();
        let mut buf = Vec::new();
        curve.write_csv(&mut buf).unwrap();
        let mut rdr = csv::Reader::from_reader(buf.as_slice());
        let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
        assert_eq!(rows.len(), 11);
        for (k, r) in rows.iter().enumerate() {
            let s: f64 = r[2].parse().unwrap();
            let b: f64 = r[3].parse().unwrap();
            let f: f64 = r[1].parse().unwrap();
            assert_eq!(f, curve.fom_values[k]);
            if b > 0.0 {
                assert_eq!(fom(s, b, &p).unwrap(), f);
            }
        }
    }
}
