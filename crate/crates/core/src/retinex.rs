//! Classical Retinex baselines: SSR, MSR and MSRCR.
//!
//! The reflectance is computed in the log domain as
//! `log(S + δ) - log(F_σ * S + δ)` with `δ = 1/255`, summed over scales for
//! MSR, and only then stretched to `[0, 1]` around its mean.
//! Color images are processed channel by channel.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filters::gaussian_surround;
use crate::raster::{ColorImage, ImagePlane};

/// Guard added inside every logarithm.
pub const LOG_GUARD: f64 = 1.0 / 255.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RetinexParams {
    /// Gaussian surround scales in pixels.
    pub scales: Vec<f64>,
    /// Per-scale weights; must sum to 1.
    pub weights: Vec<f64>,
    /// MSRCR nonlinearity strength.
    pub alpha: f64,
    /// MSRCR gain.
    pub beta: f64,
    /// Half-width of the output stretch in standard deviations.
    pub clip_k: f64,
}

impl RetinexParams {
    pub const SSR_SIGMA: f64 = 80.0;

    /// Single scale `σ = 80`.
    pub fn single_scale() -> Self {
        Self::with_scales(vec![Self::SSR_SIGMA])
    }

    /// Three scales `σ = 15, 80, 250` with equal weights.
    pub fn multi_scale() -> Self {
        Self::with_scales(vec![15.0, 80.0, 250.0])
    }

    /// Equal weights over `scales`.
    pub fn with_scales(scales: Vec<f64>) -> Self {
        let n = scales.len().max(1) as f64;
        Self {
            weights: vec![1.0 / n; scales.len()],
            scales,
            alpha: 125.0,
            beta: 46.0,
            clip_k: 3.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.scales.is_empty() {
            return Err(Error::param("scales", "at least one scale is required"));
        }
        if self.scales.len() != self.weights.len() {
            return Err(Error::param(
                "weights",
                format!(
                    "{} weights for {} scales",
                    self.weights.len(),
                    self.scales.len()
                ),
            ));
        }
        if let Some(s) = self.scales.iter().find(|s| !(**s > 0.0 && s.is_finite())) {
            return Err(Error::param("scales", format!("must be positive, got {s}")));
        }
        let total: f64 = self.weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::param("weights", format!("must sum to 1, got {total}")));
        }
        if !(self.clip_k > 0.0) {
            return Err(Error::param("clip_k", format!("must be positive, got {}", self.clip_k)));
        }
        Ok(())
    }
}

impl Default for RetinexParams {
    fn default() -> Self {
        Self::multi_scale()
    }
}

/// Unstretched single-scale log reflectance.
pub fn log_reflectance(plane: &ImagePlane, sigma: f64) -> Result<ImagePlane> {
    let surround = gaussian_surround(plane, sigma)?;
    plane.zip_map(&surround, |s, l| (s + LOG_GUARD).ln() - (l + LOG_GUARD).ln())
}

/// Maps `[μ - k·s, μ + k·s]` linearly onto `[0, 1]` and clamps, where μ and
/// s are the mean and population std of the plane. A (numerically)
/// zero-variance plane maps to 0.5 everywhere.
pub fn stretch(plane: &ImagePlane, clip_k: f64) -> ImagePlane {
    let mean = plane.mean();
    let std = plane.std_dev();
    if !(std > 1e-12) {
        return plane.map(|_| 0.5);
    }
    let lo = mean - clip_k * std;
    let span = 2.0 * clip_k * std;
    plane.map(|v| ((v - lo) / span).clamp(0.0, 1.0))
}

pub fn ssr(plane: &ImagePlane, sigma: f64, clip_k: f64) -> Result<ImagePlane> {
    Ok(stretch(&log_reflectance(plane, sigma)?, clip_k))
}

/// Weighted sum of the per-scale log reflectances, before stretching.
pub fn msr_log(plane: &ImagePlane, params: &RetinexParams) -> Result<ImagePlane> {
    params.validate()?;
    let mut acc = ImagePlane::filled(plane.width(), plane.height(), 0.0);
    for (&sigma, &w) in params.scales.iter().zip(&params.weights) {
        let lr = log_reflectance(plane, sigma)?;
        for (a, v) in acc.samples_mut().iter_mut().zip(lr.samples()) {
            *a += w * v;
        }
    }
    Ok(acc)
}

pub fn msr(plane: &ImagePlane, params: &RetinexParams) -> Result<ImagePlane> {
    Ok(stretch(&msr_log(plane, params)?, params.clip_k))
}

/// Per-channel SSR.
pub fn ssr_color(img: &ColorImage, sigma: f64, clip_k: f64) -> Result<ColorImage> {
    Ok(ColorImage {
        r: ssr(&img.r, sigma, clip_k)?,
        g: ssr(&img.g, sigma, clip_k)?,
        b: ssr(&img.b, sigma, clip_k)?,
        source_depth: img.source_depth,
    })
}

/// Per-channel MSR.
pub fn msr_color(img: &ColorImage, params: &RetinexParams) -> Result<ColorImage> {
    Ok(ColorImage {
        r: msr(&img.r, params)?,
        g: msr(&img.g, params)?,
        b: msr(&img.b, params)?,
        source_depth: img.source_depth,
    })
}

/// Color restoration factor `β · log(α · S_c / ΣS + δ)` of one channel value.
#[inline]
pub fn color_restoration(channel: f64, total: f64, alpha: f64, beta: f64) -> f64 {
    beta * (alpha * channel / (total + LOG_GUARD) + LOG_GUARD).ln()
}

/// MSRCR: each channel's MSR log output multiplied by its color restoration
/// factor, then stretched per channel.
pub fn msrcr(img: &ColorImage, params: &RetinexParams) -> Result<ColorImage> {
    params.validate()?;
    let total = img
        .r
        .zip_map(&img.g, |r, g| r + g)?
        .zip_map(&img.b, |rg, b| rg + b)?;
    let channel = |s: &ImagePlane| -> Result<ImagePlane> {
        let log_msr = msr_log(s, params)?;
        let restored: Vec<f64> = s
            .samples()
            .iter()
            .zip(total.samples())
            .zip(log_msr.samples())
            .map(|((&sc, &t), &lr)| color_restoration(sc, t, params.alpha, params.beta) * lr)
            .collect();
        let restored = ImagePlane::new(s.width(), s.height(), restored)?;
        Ok(stretch(&restored, params.clip_k))
    };
    Ok(ColorImage {
        r: channel(&img.r)?,
        g: channel(&img.g)?,
        b: channel(&img.b)?,
        source_depth: img.source_depth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_defaults() {
        let p = RetinexParams::multi_scale();
        assert_eq!(p.scales, vec![15.0, 80.0, 250.0]);
        assert!(p.weights.iter().all(|&w| w == 1.0 / 3.0));
        assert!(p.validate().is_ok());
        assert_eq!(RetinexParams::single_scale().scales, vec![80.0]);
        assert_eq!((p.alpha, p.beta, p.clip_k), (125.0, 46.0, 3.0));
    }

    #[test]
    fn params_rejects_mismatch_and_bad_sum() {
        let mut p = RetinexParams::multi_scale();
        p.weights.pop();
        assert!(p.validate().is_err());
        let mut p = RetinexParams::multi_scale();
        p.weights = vec![0.5, 0.5, 0.5];
        assert!(p.validate().is_err());
        let p = RetinexParams::with_scales(vec![]);
        assert!(p.validate().is_err());
    }

    #[test]
    fn constant_plane_stretches_to_half() {
        let c = ImagePlane::filled(12, 9, 0.3);
        let out = ssr(&c, 80.0, 3.0).unwrap();
        assert!(out.samples().iter().all(|&v| v == 0.5));
    }

    #[test]
    fn stretch_maps_band_to_unit_interval() {
        let p = ImagePlane::new(2, 1, vec![-1.0, 1.0]).unwrap();
        // mean 0, std 1, k = 1 -> [-1, 1] -> [0, 1]
        let s = stretch(&p, 1.0);
        assert_eq!(s.samples(), &[0.0, 1.0]);
    }

    #[test]
    fn restoration_sign_follows_channel_share() {
        // S_c above the gray share 1/3 with α = 125 gives a positive factor
        let c = color_restoration(0.6, 0.6 + 0.2 + 0.1, 125.0, 46.0);
        assert!(c > 0.0);
        let c_gray = color_restoration(0.3, 0.9, 125.0, 46.0);
        assert!(c_gray > 0.0);
        // only a channel share below about 1/α goes negative
        assert!(color_restoration(0.001, 0.9, 125.0, 46.0) < 0.0);
    }
}
