use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Published maximal FOM of the boosted-decision-tree reference, with its
/// uncertainty. Recorded for comparison only.
pub const BDT_REFERENCE_FOM: (f64, f64) = (1.44, 0.06);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FomParams {
    /// Relative background uncertainty, `σ_B = f·B`.
    pub f: f64,
    pub luminosity: String,
}

impl Default for FomParams {
    fn default() -> Self {
        FomParams { f: 0.2, luminosity: "35.9 fb^-1".into() }
    }
}

impl FomParams {
    pub fn with_f(f: f64) -> Self {
        FomParams { f, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.f >= 0.0 && self.f.is_finite()) {
            return Err(Error::config(format!("relative background uncertainty must be non-negative, got {}", self.f)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FomValue {
    pub value: f64,
    /// The radicand came out negative through rounding and was set to zero.
    pub clamped: bool,
}

/// `√(2((S+B)ln(1+S/B) − S))`, the `f → 0` limit.
pub fn asimov(s: f64, b: f64) -> f64 {
    (2.0 * ((s + b) * (s / b).ln_1p() - s)).max(0.0).sqrt()
}

pub fn fom_detail(s: f64, b: f64, params: &FomParams) -> Result<FomValue> {
    params.validate()?;
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::input(format!("background yield must be positive, got {b}")));
    }
    if !(s >= 0.0 && s.is_finite()) {
        return Err(Error::input(format!("signal yield must be non-negative, got {s}")));
    }
    let radicand = if params.f == 0.0 {
        2.0 * ((s + b) * (s / b).ln_1p() - s)
    } else {
        let var = (params.f * b).powi(2);
        // (S+B)(B+σ²) = B² + (S+B)σ² + S·B
        let ratio = (s * b / (b * b + (s + b) * var)).ln_1p();
        let second = (b * b / var) * (var * s / (b * (b + var))).ln_1p();
        2.0 * ((s + b) * ratio - second)
    };
    if radicand < 0.0 {
        return Ok(FomValue { value: 0.0, clamped: true });
    }
    Ok(FomValue { value: radicand.sqrt(), clamped: false })
}

/// Expected significance with a relative background systematic.
pub fn fom(s: f64, b: f64, params: &FomParams) -> Result<f64> {
    fom_detail(s, b, params).map(|v| v.value)
}
