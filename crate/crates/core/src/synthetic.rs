//! Deterministic synthetic scenes.
//!
//! The bundled corpus stands in for real low-light photographs: each scene is
//! a well-exposed image scaled down and quantized to 8 bits, so it behaves
//! like a decoded file. Everything is seeded; the same call always returns
//! the same samples.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::raster::{decode_sample, encode_sample, ColorImage, ImagePlane};

/// Vertical 0→1 step at column `width / 2` plus uniform texture in
/// `[-amplitude, amplitude]`. Not clamped.
pub fn textured_step(width: usize, height: usize, amplitude: f64, seed: u64) -> ImagePlane {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edge = width / 2;
    ImagePlane::from_fn(width, height, |x, _| {
        let base = if x < edge { 0.0 } else { 1.0 };
        base + amplitude * rng.gen_range(-1.0..=1.0)
    })
}

/// Horizontal ramp from `lo` at the left to `hi` at the right.
pub fn ramp(width: usize, height: usize, lo: f64, hi: f64) -> ImagePlane {
    let span = (width.max(2) - 1) as f64;
    ImagePlane::from_fn(width, height, |x, _| lo + (hi - lo) * x as f64 / span)
}

/// Uniform random plane in `[0, 1)`.
pub fn random_plane(width: usize, height: usize, seed: u64) -> ImagePlane {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ImagePlane::from_fn(width, height, |_, _| rng.gen::<f64>())
}

/// Snaps every sample to the nearest 8-bit level.
pub fn quantize(img: &ColorImage) -> ColorImage {
    img.map_channels(|p| p.map(|v| decode_sample(encode_sample(v))))
}

/// Multiplies every channel by `factor` and quantizes.
pub fn darken(img: &ColorImage, factor: f64) -> ColorImage {
    quantize(&img.map_channels(|p| p.map(|v| v * factor)))
}

/// A well-exposed color scene: a smooth sky-to-ground gradient, a few
/// colored discs and bars with hard edges, and mild sensor-like texture.
pub fn color_scene(width: usize, height: usize, seed: u64) -> ColorImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (wf, hf) = (width as f64, height as f64);
    let discs: Vec<([f64; 2], f64, [f64; 3])> = (0..5)
        .map(|_| {
            let c = [rng.gen_range(0.15..0.85) * wf, rng.gen_range(0.15..0.85) * hf];
            let r = rng.gen_range(0.08..0.2) * wf.min(hf);
            let col = [
                rng.gen_range(0.1..0.95),
                rng.gen_range(0.1..0.95),
                rng.gen_range(0.1..0.95),
            ];
            (c, r, col)
        })
        .collect();
    let bar_x = (0.7 * wf) as usize;
    let img = ColorImage::from_fn(width, height, |x, y| {
        let (u, v) = (x as f64 / wf, y as f64 / hf);
        let mut px = [
            0.35 + 0.45 * u * (1.0 - v),
            0.45 + 0.35 * (1.0 - v),
            0.8 - 0.5 * v + 0.1 * u,
        ];
        for (c, r, col) in &discs {
            let d = ((x as f64 - c[0]).powi(2) + (y as f64 - c[1]).powi(2)).sqrt();
            if d < *r {
                px = *col;
            }
        }
        if x >= bar_x && x < bar_x + width / 16 + 1 {
            px = [0.95, 0.92, 0.85];
        }
        let t = 0.02 * rng.gen_range(-1.0..=1.0);
        px.map(|c| (c + t).clamp(0.0, 1.0))
    });
    quantize(&img)
}

/// Large flat patches of strongly saturated colors.
pub fn saturated_scene(width: usize, height: usize) -> ColorImage {
    const PALETTE: [[f64; 3]; 6] = [
        [0.9, 0.1, 0.1],
        [0.1, 0.85, 0.15],
        [0.12, 0.2, 0.9],
        [0.9, 0.8, 0.1],
        [0.8, 0.1, 0.75],
        [0.1, 0.8, 0.85],
    ];
    let img = ColorImage::from_fn(width, height, |x, y| {
        let cell = (x * 3 / width) + 3 * (y * 2 / height);
        let base = PALETTE[cell % PALETTE.len()];
        let shade = 0.6 + 0.4 * (x as f64 / width as f64);
        base.map(|c| c * shade)
    });
    quantize(&img)
}

/// Gray scene with a soft face-like blob lit from one side.
pub fn gray_scene(width: usize, height: usize, seed: u64) -> ImagePlane {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (cx, cy) = (width as f64 / 2.0, height as f64 / 2.0);
    let (rx, ry) = (width as f64 * 0.3, height as f64 * 0.38);
    ImagePlane::from_fn(width, height, |x, y| {
        let dx = (x as f64 - cx) / rx;
        let dy = (y as f64 - cy) / ry;
        let inside = dx * dx + dy * dy < 1.0;
        let light = 0.4 + 0.6 * x as f64 / width as f64;
        let base = if inside { 0.75 } else { 0.3 };
        let eyes = inside && dy > -0.45 && dy < -0.2 && (dx.abs() - 0.4).abs() < 0.15;
        let v = if eyes { 0.1 } else { base * light };
        decode_sample(encode_sample(v + 0.015 * rng.gen_range(-1.0..=1.0)))
    })
}

/// Named low-light images used by the acceptance suite and CLI checks.
pub fn corpus() -> Vec<(&'static str, ColorImage)> {
    vec![
        ("scene_dark", darken(&color_scene(96, 96, 7), 0.25)),
        ("scene_wide_dark", darken(&color_scene(160, 96, 11), 0.3)),
        ("saturated_dark", darken(&saturated_scene(96, 64), 0.3)),
        (
            "face_gray_dark",
            ColorImage::from_gray(gray_scene(80, 96, 3).map(|v| v * 0.35)).quantized(),
        ),
        ("scene_large_dark", darken(&color_scene(512, 512, 23), 0.25)),
    ]
}
