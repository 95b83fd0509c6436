use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mean-centred eigenbasis of a sample covariance. No components are
/// dropped: the projection is a rotation into decorrelated coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaTransform {
    pub mean: Vec<f64>,
    /// Rows are unit components, ordered by descending eigenvalue. Each row
    /// is signed so that its largest-magnitude entry is positive.
    pub components: Vec<Vec<f64>>,
    pub eigenvalues: Vec<f64>,
}

pub fn fit_pca(rows: &[Vec<f64>]) -> Result<PcaTransform> {
    if rows.len() < 2 {
        return Err(Error::input(format!("PCA needs at least 2 rows, got {}", rows.len())));
    }
    let p = rows[0].len();
    if p == 0 || rows.iter().any(|r| r.len() != p) {
        return Err(Error::input("PCA rows must share a non-zero width"));
    }
    if rows.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::input("PCA input contains non-finite values"));
    }
    let n = rows.len() as f64;
    let mean: Vec<f64> = (0..p).map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / n).collect();
    let mut cov = DMatrix::<f64>::zeros(p, p);
    for r in rows {
        for i in 0..p {
            let di = r[i] - mean[i];
            for j in i..p {
                cov[(i, j)] += di * (r[j] - mean[j]);
            }
        }
    }
    for i in 0..p {
        for j in i..p {
            let v = cov[(i, j)] / (n - 1.0);
            cov[(i, j)] = v;
            cov[(j, i)] = v;
        }
    }
    let eig = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let components = order
        .iter()
        .map(|&k| {
            let mut c: Vec<f64> = eig.eigenvectors.column(k).iter().copied().collect();
            let lead = c.iter().copied().fold(0.0f64, |m, v| if v.abs() > m.abs() { v } else { m });
            if lead < 0.0 {
                c.iter_mut().for_each(|v| *v = -*v);
            }
            c
        })
        .collect();
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    Ok(PcaTransform { mean, components, eigenvalues })
}

impl PcaTransform {
    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn project(&self, row: &[f64]) -> Result<Vec<f64>> {
        if row.len() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: row.len() });
        }
        Ok(self
            .components
            .iter()
            .map(|c| c.iter().zip(row).zip(&self.mean).map(|((c, x), m)| c * (x - m)).sum())
            .collect())
    }

    pub fn reconstruct(&self, projected: &[f64]) -> Result<Vec<f64>> {
        if projected.len() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: projected.len() });
        }
        let mut out = self.mean.clone();
        for (c, y) in self.components.iter().zip(projected) {
            for (o, cj) in out.iter_mut().zip(c) {
                *o += y * cj;
            }
        }
        Ok(out)
    }
}

pub fn apply_pca(t: &PcaTransform, rows: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    rows.iter().map(|r| t.project(r)).collect()
}
