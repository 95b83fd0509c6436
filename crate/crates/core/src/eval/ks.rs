use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Process};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// Asymptotic Kolmogorov distribution tail `Q(λ) = P(K > λ)`.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        // Jacobi theta form, fast for small λ
        let y = (-std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda)).exp();
        let c = (2.0 * std::f64::consts::PI).sqrt() / lambda;
        let series = y + y.powi(9) + y.powi(25) + y.powi(49);
        (1.0 - c * series).clamp(0.0, 1.0)
    } else {
        let x = (-2.0 * lambda * lambda).exp();
        let series = x - x.powi(4) + x.powi(9) - x.powi(16);
        (2.0 * series).clamp(0.0, 1.0)
    }
}

/// Two-sample statistic `max |F_a − F_b|` with the asymptotic p-value at
/// `λ = (√n_e + 0.12 + 0.11/√n_e)·D`, `n_e = n_a n_b/(n_a + n_b)`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::input("KS test needs two non-empty samples"));
    }
    if a.iter().chain(b).any(|x| x.is_nan()) {
        return Err(Error::input("KS test samples contain NaN"));
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let ne = na * nb / (na + nb);
    let sq = ne.sqrt();
    let p_value = kolmogorov_q((sq + 0.12 + 0.11 / sq) * d);
    Ok(KsResult { statistic: d, p_value })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassKs {
    pub process: Process,
    pub n_train: usize,
    pub n_test: usize,
    pub ks: KsResult,
}

/// Train-versus-test comparison of classifier outputs, one test per process
/// present in both samples.
pub fn overtraining_check(train: &Dataset, train_scores: &[f64], test: &Dataset, test_scores: &[f64]) -> Result<Vec<ClassKs>> {
    if train.len() != train_scores.len() || test.len() != test_scores.len() {
        return Err(Error::input("one score is needed per event"));
    }
    let pick = |d: &Dataset, s: &[f64], p: Process| -> Vec<f64> {
        d.events.iter().zip(s).filter(|(e, _)| e.process == p).map(|(_, &x)| x).collect()
    };
    let mut out = Vec::new();
    for p in Process::ALL {
        let a = pick(train, train_scores, p);
        let b = pick(test, test_scores, p);
        if a.is_empty() || b.is_empty() {
            continue;
        }
        out.push(ClassKs { process: p, n_train: a.len(), n_test: b.len(), ks: ks_two_sample(&a, &b)? });
    }
    Ok(out)
}
