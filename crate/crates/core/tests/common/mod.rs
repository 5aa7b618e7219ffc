//! Brute-force reference implementations shared by the integration tests.
//!
//! Nothing here calls into the library's filters; each oracle recomputes its
//! result directly from the definitions with plain loops.

#![allow(dead_code)]

use wgif_retinex::ImagePlane;

fn window(c: usize, r: usize, len: usize) -> std::ops::Range<usize> {
    c.saturating_sub(r)..(c + r + 1).min(len)
}

/// Clipped-window mean by direct summation.
pub fn naive_box(p: &ImagePlane, r: usize) -> ImagePlane {
    ImagePlane::from_fn(p.width(), p.height(), |x, y| {
        let mut s = 0.0;
        let mut n = 0.0;
        for yy in window(y, r, p.height()) {
            for xx in window(x, r, p.width()) {
                s += p.get(xx, yy);
                n += 1.0;
            }
        }
        s / n
    })
}

/// Full 2-D convolution with the truncated, renormalized Gaussian and edge
/// replication.
pub fn naive_gaussian(p: &ImagePlane, sigma: f64) -> ImagePlane {
    let radius = (3.0 * sigma).ceil() as i64;
    let mut norm = 0.0;
    for dy in -radius..=radius {
        for dx in -radius..=radius {
            norm += (-((dx * dx + dy * dy) as f64) / (2.0 * sigma * sigma)).exp();
        }
    }
    let (w, h) = (p.width() as i64, p.height() as i64);
    ImagePlane::from_fn(p.width(), p.height(), |x, y| {
        let mut acc = 0.0;
        for dy in -radius..=radius {
            for dx in -radius..=radius {
                let sx = (x as i64 + dx).clamp(0, w - 1) as usize;
                let sy = (y as i64 + dy).clamp(0, h - 1) as usize;
                let k = (-((dx * dx + dy * dy) as f64) / (2.0 * sigma * sigma)).exp();
                acc += k * p.get(sx, sy);
            }
        }
        acc / norm
    })
}

/// Population variance of the clipped 3x3 window, by direct summation.
pub fn naive_local_variance(p: &ImagePlane) -> ImagePlane {
    ImagePlane::from_fn(p.width(), p.height(), |x, y| {
        let mut vals = Vec::with_capacity(9);
        for yy in window(y, 1, p.height()) {
            for xx in window(x, 1, p.width()) {
                vals.push(p.get(xx, yy));
            }
        }
        let n = vals.len() as f64;
        let m = vals.iter().sum::<f64>() / n;
        vals.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / n
    })
}

/// Edge weights straight from their definition: for every pixel, the mean
/// over all pixels j of `(σ²(i) + ζ) / (σ²(j) + ζ)`.
pub fn naive_edge_weight(p: &ImagePlane, zeta: f64) -> ImagePlane {
    let var = naive_local_variance(p);
    let n = var.len() as f64;
    let s = var.samples();
    ImagePlane::from_fn(p.width(), p.height(), |x, y| {
        let vi = var.get(x, y) + zeta;
        s.iter().map(|vj| vi / (vj + zeta)).sum::<f64>() / n
    })
}

/// Minimizes `Σ (a I + b - p)² + |w| λ a²` over one window by solving the
/// 2x2 normal equations.
fn window_fit(
    guide: &ImagePlane,
    input: &ImagePlane,
    x: usize,
    y: usize,
    r: usize,
    lambda: f64,
) -> (f64, f64) {
    let (mut si, mut sp, mut sii, mut sip, mut n) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for yy in window(y, r, guide.height()) {
        for xx in window(x, r, guide.width()) {
            let (i, p) = (guide.get(xx, yy), input.get(xx, yy));
            si += i;
            sp += p;
            sii += i * i;
            sip += i * p;
            n += 1.0;
        }
    }
    // [sii + nλ, si; si, n] [a; b] = [sip; sp]
    let m00 = sii + n * lambda;
    let det = m00 * n - si * si;
    let a = (sip * n - si * sp) / det;
    let b = (m00 * sp - si * sip) / det;
    (a, b)
}

fn apply_fits(
    guide: &ImagePlane,
    input: &ImagePlane,
    r: usize,
    lambda: impl Fn(usize, usize) -> f64,
) -> ImagePlane {
    let (w, h) = (guide.width(), guide.height());
    let mut a = ImagePlane::filled(w, h, 0.0);
    let mut b = ImagePlane::filled(w, h, 0.0);
    for y in 0..h {
        for x in 0..w {
            let (ak, bk) = window_fit(guide, input, x, y, r, lambda(x, y));
            a.set(x, y, ak);
            b.set(x, y, bk);
        }
    }
    let (am, bm) = (naive_box(&a, r), naive_box(&b, r));
    ImagePlane::from_fn(w, h, |x, y| am.get(x, y) * guide.get(x, y) + bm.get(x, y))
}

/// Guided filter by per-window least squares.
pub fn naive_guided(guide: &ImagePlane, input: &ImagePlane, r: usize, eps: f64) -> ImagePlane {
    apply_fits(guide, input, r, |_, _| eps)
}

/// Weighted guided filter by per-window least squares with regularizer
/// `eps / Γ(k)` at window center `k`.
pub fn naive_weighted_guided(
    guide: &ImagePlane,
    input: &ImagePlane,
    r: usize,
    eps: f64,
    zeta: f64,
) -> ImagePlane {
    let gamma = naive_edge_weight(guide, zeta);
    apply_fits(guide, input, r, |x, y| eps / gamma.get(x, y))
}

/// Per-pixel average gradient with forward differences.
pub fn naive_average_gradient(p: &ImagePlane) -> f64 {
    let mut vals = Vec::new();
    for y in 0..p.height() - 1 {
        for x in 0..p.width() - 1 {
            let dx = p.get(x + 1, y) - p.get(x, y);
            let dy = p.get(x, y + 1) - p.get(x, y);
            vals.push(((dx * dx + dy * dy) / 2.0).sqrt());
        }
    }
    255.0 * vals.iter().sum::<f64>() / vals.len() as f64
}

/// Sobel magnitude by explicit 3x3 kernel correlation.
pub fn naive_edge_intensity(p: &ImagePlane) -> f64 {
    const KX: [[f64; 3]; 3] = [[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]];
    const KY: [[f64; 3]; 3] = [[-1.0, -2.0, -1.0], [0.0, 0.0, 0.0], [1.0, 2.0, 1.0]];
    let mut total = 0.0;
    let mut n = 0.0;
    for y in 1..p.height() - 1 {
        for x in 1..p.width() - 1 {
            let (mut gx, mut gy) = (0.0, 0.0);
            for (j, (rx, ry)) in KX.iter().zip(KY.iter()).enumerate() {
                for i in 0..3 {
                    let v = p.get(x + i - 1, y + j - 1);
                    gx += rx[i] * v;
                    gy += ry[i] * v;
                }
            }
            total += (gx * gx + gy * gy).sqrt();
            n += 1.0;
        }
    }
    255.0 * total / n
}

/// Shannon entropy from an explicit map of byte levels.
pub fn naive_entropy(p: &ImagePlane) -> f64 {
    let mut counts = std::collections::BTreeMap::new();
    for &v in p.samples() {
        *counts.entry((v.clamp(0.0, 1.0) * 255.999) as u32).or_insert(0usize) += 1;
    }
    let n = p.len() as f64;
    counts
        .values()
        .map(|&c| {
            let q = c as f64 / n;
            -q * q.log2()
        })
        .sum()
}

/// Block std x gray by collecting each block's samples.
pub fn naive_std_gray(p: &ImagePlane, block: usize) -> f64 {
    let mut stds = Vec::new();
    let mut means = Vec::new();
    let mut by = 0;
    while (by + 1) * block <= p.height() {
        let mut bx = 0;
        while (bx + 1) * block <= p.width() {
            let vals: Vec<f64> = (by * block..(by + 1) * block)
                .flat_map(|y| (bx * block..(bx + 1) * block).map(move |x| (x, y)))
                .map(|(x, y)| p.get(x, y))
                .collect();
            let m = vals.iter().sum::<f64>() / vals.len() as f64;
            let var = vals.iter().map(|v| (v - m).powi(2)).sum::<f64>() / vals.len() as f64;
            stds.push(var.sqrt());
            means.push(m);
            bx += 1;
        }
        by += 1;
    }
    let avg = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    255.0 * avg(&stds) * 255.0 * avg(&means)
}
