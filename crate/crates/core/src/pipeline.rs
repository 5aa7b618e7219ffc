//! WGIF Retinex enhancement.
//!
//! Stages, all on the HSI intensity channel:
//!
//! ```text
//! S_I ──WGIF──▶ S_IL ──gamma──▶ S_ILG ──stretch──▶ S_ILGf ─┐
//!  │                                                        ×──▶ S_IE ──sigmoid──▶ S_IEf
//!  └──── S_I / S_IL ──▶ S_IR ──WGIF──▶ S_IRh ───────────────┘
//! ```
//!
//! The enhanced intensity is turned into a per-pixel gain `S_IEf / S_I` that
//! multiplies all three RGB channels alike, so hue is never touched.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filters::{weighted_guided_filter, FilterParams};
use crate::raster::{percentile, rgb_to_intensity, ColorImage, ImagePlane};

/// Which plane guides the reflection denoising filter.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DenoiseGuide {
    /// The reflection plane guides itself.
    #[default]
    #[serde(rename = "self")]
    SelfGuided,
    /// The intensity plane guides the reflection plane.
    Intensity,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    pub filter: FilterParams,
    /// Floor on the illumination in `S_I / S_IL`.
    pub reflection_floor: f64,
    /// Fraction clipped at each end by the illumination stretch.
    pub stretch_clip: f64,
    pub sigmoid_slope: f64,
    /// Floor on the intensity in the gain map and on the max channel in the
    /// restoration cap.
    pub gain_floor: f64,
    pub denoise_guide: DenoiseGuide,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            filter: FilterParams::default(),
            reflection_floor: 1e-4,
            stretch_clip: 0.005,
            sigmoid_slope: 8.0,
            gain_floor: 1e-4,
            denoise_guide: DenoiseGuide::SelfGuided,
        }
    }
}

/// Flat JSON layout of [`PipelineConfig`]; absent keys keep their defaults.
#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    radius: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    zeta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stretch_clip: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reflection_floor: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gain_floor: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sigmoid_slope: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    denoise_guide: Option<DenoiseGuide>,
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        self.filter.validate()?;
        for (name, v) in [
            ("reflection_floor", self.reflection_floor),
            ("gain_floor", self.gain_floor),
        ] {
            if !(v > 0.0 && v <= 0.01) {
                return Err(Error::param(name, format!("must be in (0, 0.01], got {v}")));
            }
        }
        if !(0.0..=0.05).contains(&self.stretch_clip) {
            return Err(Error::param(
                "stretch_clip",
                format!("must be in [0, 0.05], got {}", self.stretch_clip),
            ));
        }
        if !(self.sigmoid_slope > 0.0 && self.sigmoid_slope.is_finite()) {
            return Err(Error::param(
                "sigmoid_slope",
                format!("must be positive, got {}", self.sigmoid_slope),
            ));
        }
        Ok(())
    }

    /// Parses the flat JSON object form and validates the result.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: ConfigJson =
            serde_json::from_str(text).map_err(|e| Error::param("config", e.to_string()))?;
        let mut cfg = Self::default();
        if let Some(v) = raw.radius {
            cfg.filter.radius = v;
        }
        if let Some(v) = raw.epsilon {
            cfg.filter.epsilon = v;
        }
        if let Some(v) = raw.zeta {
            cfg.filter.zeta = v;
        }
        if let Some(v) = raw.stretch_clip {
            cfg.stretch_clip = v;
        }
        if let Some(v) = raw.reflection_floor {
            cfg.reflection_floor = v;
        }
        if let Some(v) = raw.gain_floor {
            cfg.gain_floor = v;
        }
        if let Some(v) = raw.sigmoid_slope {
            cfg.sigmoid_slope = v;
        }
        if let Some(v) = raw.denoise_guide {
            cfg.denoise_guide = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        let raw = ConfigJson {
            radius: Some(self.filter.radius),
            epsilon: Some(self.filter.epsilon),
            zeta: Some(self.filter.zeta),
            stretch_clip: Some(self.stretch_clip),
            reflection_floor: Some(self.reflection_floor),
            gain_floor: Some(self.gain_floor),
            sigmoid_slope: Some(self.sigmoid_slope),
            denoise_guide: Some(self.denoise_guide),
        };
        serde_json::to_string_pretty(&raw).expect("plain struct serializes")
    }
}

/// Every intermediate plane of one [`enhance`] run.
#[derive(Clone, Debug)]
pub struct PipelineStages {
    /// Intensity `(R + G + B) / 3`.
    pub s_i: ImagePlane,
    /// Illumination estimated by the WGIF.
    pub s_il: ImagePlane,
    /// Reflection `S_I / S_IL`.
    pub s_ir: ImagePlane,
    /// Gamma-corrected illumination.
    pub s_ilg: ImagePlane,
    /// Stretched illumination.
    pub s_ilgf: ImagePlane,
    /// Denoised reflection.
    pub s_irh: ImagePlane,
    /// Fused intensity.
    pub s_ie: ImagePlane,
    /// Sigmoid-mapped intensity.
    pub s_ief: ImagePlane,
    /// Per-pixel brightness gain.
    pub gain: ImagePlane,
    /// `1 - mean(S_IL)`.
    pub gamma_a: f64,
    /// `mean(S_IE)`.
    pub sigmoid_b: f64,
}

/// WGIF of the intensity guided by itself, clamped to `[0, 1]`.
pub fn estimate_illumination(s_i: &ImagePlane, cfg: &PipelineConfig) -> Result<ImagePlane> {
    let (q, _) = weighted_guided_filter(s_i, s_i, &cfg.filter)?;
    Ok(q.clamp01())
}

/// `S_I / max(S_IL, reflection_floor)`.
pub fn compute_reflection(
    s_i: &ImagePlane,
    s_il: &ImagePlane,
    cfg: &PipelineConfig,
) -> Result<ImagePlane> {
    let floor = cfg.reflection_floor;
    s_i.zip_map(s_il, |i, l| i / l.max(floor))
}

/// Adaptive gamma `S_IL^φ` with `φ = (S_IL + a) / (1 + a)` and
/// `a = 1 - mean(S_IL)`. Returns the corrected plane and `a`.
pub fn adaptive_gamma(s_il: &ImagePlane) -> (ImagePlane, f64) {
    let a = 1.0 - s_il.mean();
    let out = s_il.map(|l| {
        if l <= 0.0 {
            0.0
        } else {
            l.powf((l + a) / (1.0 + a))
        }
    });
    (out, a)
}

/// Percentile min-max stretch to `[0, 1]`; flat planes pass through.
pub fn linear_stretch(s_ilg: &ImagePlane, cfg: &PipelineConfig) -> ImagePlane {
    let lo = percentile(s_ilg, cfg.stretch_clip);
    let hi = percentile(s_ilg, 1.0 - cfg.stretch_clip);
    let span = hi - lo;
    if span < 1e-6 {
        return s_ilg.clone();
    }
    s_ilg.map(|v| ((v - lo) / span).clamp(0.0, 1.0))
}

/// WGIF smoothing of the reflection, clamped below at 0.
///
/// `s_i` is only read when `cfg.denoise_guide` is [`DenoiseGuide::Intensity`].
pub fn denoise_reflection(
    s_ir: &ImagePlane,
    s_i: &ImagePlane,
    cfg: &PipelineConfig,
) -> Result<ImagePlane> {
    let guide = match cfg.denoise_guide {
        DenoiseGuide::SelfGuided => s_ir,
        DenoiseGuide::Intensity => s_i,
    };
    let (q, _) = weighted_guided_filter(guide, s_ir, &cfg.filter)?;
    Ok(q.map(|v| v.max(0.0)))
}

/// Pointwise product clamped to `[0, 1]`.
pub fn fuse(s_ilgf: &ImagePlane, s_irh: &ImagePlane) -> Result<ImagePlane> {
    s_ilgf.zip_map(s_irh, |l, r| (l * r).clamp(0.0, 1.0))
}

/// Logistic map `1 / (1 + exp(-slope (S_IE - b)))` centered at
/// `b = mean(S_IE)`. Returns the mapped plane and `b`.
pub fn sigmoid_brightness(s_ie: &ImagePlane, slope: f64) -> (ImagePlane, f64) {
    let b = s_ie.mean();
    (s_ie.map(|v| 1.0 / (1.0 + (-slope * (v - b)).exp())), b)
}

/// Gain `S_IEf / max(S_I, gain_floor)`.
pub fn gain_map(s_ief: &ImagePlane, s_i: &ImagePlane, cfg: &PipelineConfig) -> Result<ImagePlane> {
    let floor = cfg.gain_floor;
    s_ief.zip_map(s_i, |e, i| (e / i.max(floor)).max(0.0))
}

/// Multiplies each pixel's RGB triple by its gain, capped so the largest
/// channel lands at most on 1. The cap scales all channels together, so the
/// channel ratios survive even where the gain would saturate.
pub fn restore_color(img: &ColorImage, gain: &ImagePlane, gain_floor: f64) -> Result<ColorImage> {
    img.r.ensure_same_dims(gain)?;
    let n = gain.len();
    let (rs, gs, bs) = (img.r.samples(), img.g.samples(), img.b.samples());
    let mut r = Vec::with_capacity(n);
    let mut g = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for (i, &alpha) in gain.samples().iter().enumerate() {
        let peak = rs[i].max(gs[i]).max(bs[i]).max(gain_floor);
        let alpha = alpha.min(1.0 / peak);
        r.push(alpha * rs[i]);
        g.push(alpha * gs[i]);
        b.push(alpha * bs[i]);
    }
    let (w, h) = (gain.width(), gain.height());
    Ok(ColorImage {
        r: ImagePlane::new(w, h, r)?,
        g: ImagePlane::new(w, h, g)?,
        b: ImagePlane::new(w, h, b)?,
        source_depth: img.source_depth,
    })
}

/// Reference nonlinear restoration: converts `img` to HSI, swaps in
/// `intensity`, and converts back with the sector formulas. Kept as the
/// baseline for timing [`restore_color`].
pub fn restore_color_hsi(img: &ColorImage, intensity: &ImagePlane) -> Result<ColorImage> {
    img.r.ensure_same_dims(intensity)?;
    let n = intensity.len();
    let (rs, gs, bs) = (img.r.samples(), img.g.samples(), img.b.samples());
    let mut r = Vec::with_capacity(n);
    let mut g = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for (k, &new_i) in intensity.samples().iter().enumerate() {
        let (h, s, _) = rgb_to_hsi(rs[k], gs[k], bs[k]);
        let [pr, pg, pb] = hsi_to_rgb(h, s, new_i);
        r.push(pr.clamp(0.0, 1.0));
        g.push(pg.clamp(0.0, 1.0));
        b.push(pb.clamp(0.0, 1.0));
    }
    let (w, h) = (intensity.width(), intensity.height());
    Ok(ColorImage {
        r: ImagePlane::new(w, h, r)?,
        g: ImagePlane::new(w, h, g)?,
        b: ImagePlane::new(w, h, b)?,
        source_depth: img.source_depth,
    })
}

/// `(hue in radians, saturation, intensity)`.
fn rgb_to_hsi(r: f64, g: f64, b: f64) -> (f64, f64, f64) {
    let sum = r + g + b;
    let i = sum / 3.0;
    let s = if sum > 0.0 {
        1.0 - 3.0 * r.min(g).min(b) / sum
    } else {
        0.0
    };
    let num = 0.5 * ((r - g) + (r - b));
    let den = ((r - g) * (r - g) + (r - b) * (g - b)).sqrt();
    let h = if den == 0.0 {
        0.0
    } else {
        let theta = (num / den).clamp(-1.0, 1.0).acos();
        if b <= g {
            theta
        } else {
            2.0 * PI - theta
        }
    };
    (h, s, i)
}

fn hsi_to_rgb(h: f64, s: f64, i: f64) -> [f64; 3] {
    const SECTOR: f64 = 2.0 * PI / 3.0;
    let lifted = |h: f64| i * (1.0 + s * h.cos() / (PI / 3.0 - h).cos());
    if h < SECTOR {
        let b = i * (1.0 - s);
        let r = lifted(h);
        [r, 3.0 * i - (r + b), b]
    } else if h < 2.0 * SECTOR {
        let h = h - SECTOR;
        let r = i * (1.0 - s);
        let g = lifted(h);
        [r, g, 3.0 * i - (r + g)]
    } else {
        let h = h - 2.0 * SECTOR;
        let g = i * (1.0 - s);
        let b = lifted(h);
        [3.0 * i - (g + b), g, b]
    }
}

/// Runs the whole pipeline and returns the enhanced image with every stage.
pub fn enhance(img: &ColorImage, cfg: &PipelineConfig) -> Result<(ColorImage, PipelineStages)> {
    cfg.validate()?;
    let s_i = rgb_to_intensity(img);
    let s_il = estimate_illumination(&s_i, cfg)?;
    let s_ir = compute_reflection(&s_i, &s_il, cfg)?;
    let (s_ilg, gamma_a) = adaptive_gamma(&s_il);
    let s_ilgf = linear_stretch(&s_ilg, cfg);
    let s_irh = denoise_reflection(&s_ir, &s_i, cfg)?;
    let s_ie = fuse(&s_ilgf, &s_irh)?;
    let (s_ief, sigmoid_b) = sigmoid_brightness(&s_ie, cfg.sigmoid_slope);
    let gain = gain_map(&s_ief, &s_i, cfg)?;
    let out = restore_color(img, &gain, cfg.gain_floor)?;
    Ok((
        out,
        PipelineStages {
            s_i,
            s_il,
            s_ir,
            s_ilg,
            s_ilgf,
            s_irh,
            s_ie,
            s_ief,
            gain,
            gamma_a,
            sigmoid_b,
        },
    ))
}
