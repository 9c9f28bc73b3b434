//! Reconstruction quality: relative error (percent) and PSNR (dB).

use crate::error::{invalid, Error, Result};
use crate::grid::{ensure_same_dims, Image, L2Norm};

/// Peak intensity for images normalized to `[0, 1]`.
pub const DEFAULT_PEAK: f64 = 1.0;

fn diff_norm(reference: &Image, test: &Image) -> Result<f64> {
    ensure_same_dims(reference.dims(), test.dims())?;
    Ok(reference
        .values()
        .iter()
        .zip(test.values())
        .map(|(a, b)| (b - a) * (b - a))
        .sum::<f64>()
        .sqrt())
}

/// `100·‖test − reference‖₂ / ‖reference‖₂`.
pub fn relative_error(reference: &Image, test: &Image) -> Result<f64> {
    let num = diff_norm(reference, test)?;
    let den = reference.l2_norm();
    if den == 0.0 {
        return Err(Error::ZeroReference);
    }
    Ok(100.0 * num / den)
}

/// `20·log10(peak / RMSE)`; `+∞` for identical images.
pub fn psnr(reference: &Image, test: &Image, peak: f64) -> Result<f64> {
    if !(peak > 0.0) {
        return Err(invalid("peak", format!("{peak} must be positive")));
    }
    let rmse = diff_norm(reference, test)? / (reference.len() as f64).sqrt();
    if rmse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(20.0 * (peak / rmse).log10())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityReport {
    pub relative_error_pct: f64,
    pub psnr_db: f64,
    pub peak: f64,
}

impl QualityReport {
    pub fn measure(reference: &Image, test: &Image, peak: f64) -> Result<Self> {
        Ok(Self {
            relative_error_pct: relative_error(reference, test)?,
            psnr_db: psnr(reference, test, peak)?,
            peak,
        })
    }

    /// PSNR implied by the relative error and the reference norm.
    pub fn psnr_from_relative_error(relative_error_pct: f64, reference_norm: f64, n: usize, peak: f64) -> f64 {
        if relative_error_pct == 0.0 {
            return f64::INFINITY;
        }
        20.0 * (peak * (n as f64).sqrt() * 100.0 / (relative_error_pct * reference_norm)).log10()
    }
}
