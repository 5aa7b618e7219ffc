//! Objective quality metrics.
//!
//! Scalar metrics take a plane in `[0, 1]` and report on the 0-255 scale.
//! Standard deviations and variances are population statistics.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::raster::{extract_hue, rgb_to_intensity, ColorImage, ImagePlane};

pub const DEFAULT_BLOCK: usize = 16;

/// 256-bin histogram with bin `floor(x * 255.999)` of the clamped sample.
pub fn histogram(plane: &ImagePlane) -> [u64; 256] {
    let mut hist = [0u64; 256];
    for &v in plane.samples() {
        let v = if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) };
        hist[(v * 255.999).floor() as usize] += 1;
    }
    hist
}

/// Shannon entropy of the 256-bin histogram, in bits.
pub fn entropy(plane: &ImagePlane) -> f64 {
    let n = plane.len() as f64;
    histogram(plane)
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            p * (1.0 / p).log2()
        })
        .sum::<f64>()
}

pub fn brightness(plane: &ImagePlane) -> f64 {
    255.0 * plane.mean()
}

/// Population standard deviation on the 0-255 scale.
pub fn contrast(plane: &ImagePlane) -> f64 {
    255.0 * plane.std_dev()
}

/// Mean of `sqrt((dx² + dy²) / 2)` over forward differences, excluding the
/// last row and column.
pub fn average_gradient(plane: &ImagePlane) -> Result<f64> {
    let (w, h) = (plane.width(), plane.height());
    if w < 2 || h < 2 {
        return Err(Error::TooSmall {
            width: w,
            height: h,
            min: 2,
        });
    }
    let mut total = 0.0;
    for y in 0..h - 1 {
        let row = plane.row(y);
        let next = plane.row(y + 1);
        for x in 0..w - 1 {
            let dx = row[x + 1] - row[x];
            let dy = next[x] - row[x];
            total += ((dx * dx + dy * dy) / 2.0).sqrt();
        }
    }
    Ok(255.0 * total / ((w - 1) * (h - 1)) as f64)
}

/// Mean Sobel gradient magnitude over interior pixels.
pub fn edge_intensity(plane: &ImagePlane) -> Result<f64> {
    let (w, h) = (plane.width(), plane.height());
    if w < 3 || h < 3 {
        return Err(Error::TooSmall {
            width: w,
            height: h,
            min: 3,
        });
    }
    let mut total = 0.0;
    for y in 1..h - 1 {
        let (up, mid, down) = (plane.row(y - 1), plane.row(y), plane.row(y + 1));
        for x in 1..w - 1 {
            let gx = (up[x + 1] + 2.0 * mid[x + 1] + down[x + 1])
                - (up[x - 1] + 2.0 * mid[x - 1] + down[x - 1]);
            let gy = (down[x - 1] + 2.0 * down[x] + down[x + 1])
                - (up[x - 1] + 2.0 * up[x] + up[x + 1]);
            total += (gx * gx + gy * gy).sqrt();
        }
    }
    Ok(255.0 * total / ((w - 2) * (h - 2)) as f64)
}

/// Mean block std times mean block gray over non-overlapping `block x block`
/// tiles; trailing partial tiles are dropped.
pub fn std_times_gray(plane: &ImagePlane, block: usize) -> Result<f64> {
    if block < 2 {
        return Err(Error::param("block", format!("must be at least 2, got {block}")));
    }
    let (w, h) = (plane.width(), plane.height());
    let (bx, by) = (w / block, h / block);
    if bx == 0 || by == 0 {
        return Err(Error::TooSmall {
            width: w,
            height: h,
            min: block,
        });
    }
    let count = (block * block) as f64;
    let mut std_sum = 0.0;
    let mut mean_sum = 0.0;
    for ty in 0..by {
        for tx in 0..bx {
            let mut sum = 0.0;
            for y in ty * block..(ty + 1) * block {
                sum += plane.row(y)[tx * block..(tx + 1) * block].iter().sum::<f64>();
            }
            let mean = sum / count;
            let mut sq = 0.0;
            for y in ty * block..(ty + 1) * block {
                sq += plane.row(y)[tx * block..(tx + 1) * block]
                    .iter()
                    .map(|v| (v - mean) * (v - mean))
                    .sum::<f64>();
            }
            std_sum += (sq / count).sqrt();
            mean_sum += mean;
        }
    }
    let tiles = (bx * by) as f64;
    Ok((255.0 * std_sum / tiles) * (255.0 * mean_sum / tiles))
}

/// Change rates between an original and an enhanced color image. A `None`
/// marks a zero denominator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct DeltaMetrics {
    pub delta_b: Option<f64>,
    pub delta_c: Option<f64>,
    pub delta_h: Option<f64>,
}

fn relative_change(before: f64, after: f64) -> Option<f64> {
    (before != 0.0).then(|| (after - before) / before)
}

/// ΔB and ΔC on the intensity planes (mean and variance), ΔH on the mean hue.
pub fn delta_metrics(original: &ColorImage, enhanced: &ColorImage) -> Result<DeltaMetrics> {
    original.r.ensure_same_dims(&enhanced.r)?;
    let i_in = rgb_to_intensity(original);
    let i_out = rgb_to_intensity(enhanced);
    let h_in = extract_hue(original).mean();
    let h_out = extract_hue(enhanced).mean();
    Ok(DeltaMetrics {
        delta_b: relative_change(i_in.mean(), i_out.mean()),
        delta_c: relative_change(i_in.variance(), i_out.variance()),
        delta_h: relative_change(h_in, h_out).map(f64::abs),
    })
}

/// One row of a comparison report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricsReport {
    pub entropy: f64,
    pub brightness: f64,
    pub contrast: f64,
    pub avg_gradient: f64,
    pub edge_intensity: f64,
    pub std_gray: f64,
    pub deltas: Option<DeltaMetrics>,
}

impl MetricsReport {
    /// Scalar metrics of `img`'s intensity plane, plus change rates against
    /// `original` when given.
    pub fn compute(img: &ColorImage, original: Option<&ColorImage>, block: usize) -> Result<Self> {
        let plane = rgb_to_intensity(img);
        Ok(Self {
            entropy: entropy(&plane),
            brightness: brightness(&plane),
            contrast: contrast(&plane),
            avg_gradient: average_gradient(&plane)?,
            edge_intensity: edge_intensity(&plane)?,
            std_gray: std_times_gray(&plane, block)?,
            deltas: original.map(|o| delta_metrics(o, img)).transpose()?,
        })
    }
}
