//! Smoothing kernels.
//!
//! [`box_mean`] is the workhorse: every window statistic of the guided filters
//! goes through it, and it costs a constant number of operations per pixel
//! regardless of the radius. Windows are clipped to the image and divided by
//! their true pixel count, so constant planes are reproduced exactly up to the
//! border. The Gaussian and bilateral kernels replicate edge pixels instead.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::ImagePlane;

/// `(0.001 * L)^2` for an 8-bit dynamic range `L = 256`.
pub const DEFAULT_ZETA: f64 = 0.065536;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FilterParams {
    /// Window radius; windows are `(2r+1) x (2r+1)`.
    pub radius: usize,
    /// Regularizer of the guided filters. Must be positive.
    pub epsilon: f64,
    /// Edge-weight constant of the weighted guided filter.
    pub zeta: f64,
    /// Gaussian spatial scale in pixels.
    pub sigma: f64,
    /// Bilateral range scale in sample units.
    pub sigma_range: f64,
}

impl Default for FilterParams {
    fn default() -> Self {
        Self {
            radius: 5,
            epsilon: 0.01,
            zeta: DEFAULT_ZETA,
            sigma: 5.0,
            sigma_range: 0.1,
        }
    }
}

impl FilterParams {
    pub fn validate(&self) -> Result<()> {
        if self.radius < 1 {
            return Err(Error::param("radius", "must be at least 1"));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::param(
                "epsilon",
                format!("must be positive and finite, got {}", self.epsilon),
            ));
        }
        if !(self.zeta > 0.0 && self.zeta.is_finite()) {
            return Err(Error::param(
                "zeta",
                format!("must be positive and finite, got {}", self.zeta),
            ));
        }
        if !(self.sigma > 0.0) {
            return Err(Error::param("sigma", format!("must be positive, got {}", self.sigma)));
        }
        if !(self.sigma_range > 0.0) {
            return Err(Error::param(
                "sigma_range",
                format!("must be positive, got {}", self.sigma_range),
            ));
        }
        Ok(())
    }
}

/// Per-window linear model `q = a * I + b` and the window statistics behind it.
#[derive(Clone, Debug)]
pub struct LinearCoeffs {
    pub a: ImagePlane,
    pub b: ImagePlane,
    pub a_mean: ImagePlane,
    pub b_mean: ImagePlane,
    /// Window mean of the guide.
    pub mu: ImagePlane,
    /// Window variance of the guide, clamped at 0.
    pub var: ImagePlane,
}

/// Edge-aware weights of the guide; above 1 near edges, below 1 in flat areas.
#[derive(Clone, Debug)]
pub struct EdgeWeightMap {
    pub gamma: ImagePlane,
}

/// Mean over the `(2r+1) x (2r+1)` window clipped to the image.
///
/// Two passes of prefix sums (rows, then columns) make the cost independent
/// of `r`. A radius of 0 returns the input.
pub fn box_mean(plane: &ImagePlane, r: usize) -> ImagePlane {
    let (w, h) = (plane.width(), plane.height());
    let src = plane.samples();

    // horizontal window sums
    let mut hsum = vec![0.0; w * h];
    let mut prefix = vec![0.0; w.max(h) + 1];
    for y in 0..h {
        let row = &src[y * w..(y + 1) * w];
        for x in 0..w {
            prefix[x + 1] = prefix[x] + row[x];
        }
        let out = &mut hsum[y * w..(y + 1) * w];
        for (x, o) in out.iter_mut().enumerate() {
            let x0 = x.saturating_sub(r);
            let x1 = (x + r + 1).min(w);
            *o = prefix[x1] - prefix[x0];
        }
    }

    // vertical window sums over the horizontal ones, one column at a time
    let mut out = vec![0.0; w * h];
    for x in 0..w {
        for y in 0..h {
            prefix[y + 1] = prefix[y] + hsum[y * w + x];
        }
        let x0 = x.saturating_sub(r);
        let x1 = (x + r + 1).min(w);
        let cols = (x1 - x0) as f64;
        for y in 0..h {
            let y0 = y.saturating_sub(r);
            let y1 = (y + r + 1).min(h);
            let count = cols * (y1 - y0) as f64;
            out[y * w + x] = (prefix[y1] - prefix[y0]) / count;
        }
    }
    ImagePlane::new(w, h, out).expect("same dimensions as input")
}

/// Unit-sum 1-D Gaussian truncated at `ceil(3 sigma)`.
pub fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil() as isize;
    let denom = 2.0 * sigma * sigma;
    let mut k: Vec<f64> = (-radius..=radius)
        .map(|i| (-((i * i) as f64) / denom).exp())
        .collect();
    let sum: f64 = k.iter().sum();
    k.iter_mut().for_each(|v| *v /= sum);
    k
}

#[inline]
fn clamp_index(i: isize, len: usize) -> usize {
    i.clamp(0, len as isize - 1) as usize
}

/// 1-D convolution with edge replication. Taps that fall off either end are
/// folded into a single weight on the edge sample, so the cost per sample is
/// bounded by the line length rather than the kernel length.
fn convolve_line(line: &[f64], kernel: &[f64], cum: &[f64], out: &mut [f64]) {
    let n = line.len();
    if n == 1 {
        out[0] = line[0] * cum[kernel.len()];
        return;
    }
    let radius = kernel.len() / 2;
    for (x, o) in out.iter_mut().enumerate() {
        // taps j map to sample x + j - radius
        let mut acc = 0.0;
        let lo = if radius >= x {
            acc += cum[radius - x + 1] * line[0];
            radius - x + 1
        } else {
            0
        };
        let hi = if n - 1 - x + radius < kernel.len() {
            let j = n - 1 - x + radius;
            acc += (cum[kernel.len()] - cum[j]) * line[n - 1];
            j
        } else {
            kernel.len()
        };
        for j in lo..hi {
            acc += kernel[j] * line[x + j - radius];
        }
        *o = acc;
    }
}

/// Convolution with the Gaussian surround function, separable, with edge
/// replication at the borders.
pub fn gaussian_surround(plane: &ImagePlane, sigma: f64) -> Result<ImagePlane> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::param("sigma", format!("must be positive, got {sigma}")));
    }
    let kernel = gaussian_kernel(sigma);
    let mut cum = Vec::with_capacity(kernel.len() + 1);
    cum.push(0.0);
    for &k in &kernel {
        cum.push(cum.last().unwrap() + k);
    }
    let (w, h) = (plane.width(), plane.height());
    let src = plane.samples();

    let mut tmp = vec![0.0; w * h];
    for y in 0..h {
        convolve_line(
            &src[y * w..(y + 1) * w],
            &kernel,
            &cum,
            &mut tmp[y * w..(y + 1) * w],
        );
    }

    let mut out = vec![0.0; w * h];
    let mut column = vec![0.0; h];
    let mut result = vec![0.0; h];
    for x in 0..w {
        for (y, c) in column.iter_mut().enumerate() {
            *c = tmp[y * w + x];
        }
        convolve_line(&column, &kernel, &cum, &mut result);
        for (y, &v) in result.iter().enumerate() {
            out[y * w + x] = v;
        }
    }
    ImagePlane::new(w, h, out)
}

/// Brute-force bilateral filter over a `ceil(3 sigma_spatial)` window.
///
/// `sigma_range = f64::INFINITY` turns the range weights off.
pub fn bilateral(plane: &ImagePlane, sigma_spatial: f64, sigma_range: f64) -> Result<ImagePlane> {
    if !(sigma_spatial > 0.0 && sigma_spatial.is_finite()) {
        return Err(Error::param(
            "sigma_spatial",
            format!("must be positive, got {sigma_spatial}"),
        ));
    }
    if !(sigma_range > 0.0) {
        return Err(Error::param(
            "sigma_range",
            format!("must be positive, got {sigma_range}"),
        ));
    }
    let radius = (3.0 * sigma_spatial).ceil() as isize;
    let side = (2 * radius + 1) as usize;
    let s_denom = 2.0 * sigma_spatial * sigma_spatial;
    let r_denom = 2.0 * sigma_range * sigma_range;
    let mut spatial = Vec::with_capacity(side * side);
    for dy in -radius..=radius {
        for dx in -radius..=radius {
            spatial.push((-((dx * dx + dy * dy) as f64) / s_denom).exp());
        }
    }

    let (w, h) = (plane.width(), plane.height());
    Ok(ImagePlane::from_fn(w, h, |x, y| {
        let center = plane.get(x, y);
        let mut num = 0.0;
        let mut den = 0.0;
        let mut si = 0;
        for dy in -radius..=radius {
            let sy = clamp_index(y as isize + dy, h);
            for dx in -radius..=radius {
                let sx = clamp_index(x as isize + dx, w);
                let v = plane.get(sx, sy);
                let d = v - center;
                let wgt = spatial[si] * (-(d * d) / r_denom).exp();
                num += wgt * v;
                den += wgt;
                si += 1;
            }
        }
        num / den
    }))
}

/// Shared GIF/WGIF solver; `reg(k)` is the regularizer of the window centered
/// at pixel index `k`.
fn solve_linear_model(
    guide: &ImagePlane,
    input: &ImagePlane,
    r: usize,
    reg: impl Fn(usize) -> f64,
) -> Result<(ImagePlane, LinearCoeffs)> {
    guide.ensure_same_dims(input)?;
    let mu = box_mean(guide, r);
    let p_mean = box_mean(input, r);
    let ip_mean = box_mean(&guide.zip_map(input, |i, p| i * p)?, r);
    let ii_mean = box_mean(&guide.map(|i| i * i), r);

    let var = ii_mean.zip_map(&mu, |ii, m| (ii - m * m).max(0.0))?;

    let n = guide.len();
    let (mu_s, p_s, ip_s, var_s) = (
        mu.samples(),
        p_mean.samples(),
        ip_mean.samples(),
        var.samples(),
    );
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for k in 0..n {
        let cov = ip_s[k] - mu_s[k] * p_s[k];
        let ak = cov / (var_s[k] + reg(k));
        a.push(ak);
        b.push(p_s[k] - ak * mu_s[k]);
    }
    let (w, h) = (guide.width(), guide.height());
    let a = ImagePlane::new(w, h, a)?;
    let b = ImagePlane::new(w, h, b)?;

    let a_mean = box_mean(&a, r);
    let b_mean = box_mean(&b, r);
    let output: Vec<f64> = a_mean
        .samples()
        .iter()
        .zip(b_mean.samples())
        .zip(guide.samples())
        .map(|((&am, &bm), &i)| am * i + bm)
        .collect();
    let output = ImagePlane::new(w, h, output)?;
    Ok((
        output,
        LinearCoeffs {
            a,
            b,
            a_mean,
            b_mean,
            mu,
            var,
        },
    ))
}

/// Guided image filter: `q_i = mean(a)_i * I_i + mean(b)_i` with per-window
/// least-squares coefficients regularized by `epsilon`.
pub fn guided_filter(
    guide: &ImagePlane,
    input: &ImagePlane,
    params: &FilterParams,
) -> Result<(ImagePlane, LinearCoeffs)> {
    params.validate()?;
    let eps = params.epsilon;
    solve_linear_model(guide, input, params.radius, |_| eps)
}

/// Edge weighting of `guide` from its 3x3 local variance.
///
/// `Γ(i) = (σ²(i) + ζ) · mean_j 1 / (σ²(j) + ζ)`; the mean of reciprocals is
/// computed once, so the whole map is linear in the pixel count.
pub fn edge_weight(guide: &ImagePlane, zeta: f64) -> Result<EdgeWeightMap> {
    if !(zeta > 0.0 && zeta.is_finite()) {
        return Err(Error::param("zeta", format!("must be positive, got {zeta}")));
    }
    let mean = box_mean(guide, 1);
    let sq_mean = box_mean(&guide.map(|v| v * v), 1);
    let shifted = sq_mean.zip_map(&mean, |sq, m| (sq - m * m).max(0.0) + zeta)?;
    let inv_mean =
        shifted.samples().iter().map(|v| 1.0 / v).sum::<f64>() / shifted.len() as f64;
    Ok(EdgeWeightMap {
        gamma: shifted.map(|v| v * inv_mean),
    })
}

/// Weighted guided image filter: the guided filter with the regularizer of
/// the window centered at `k` scaled to `epsilon / Γ(k)`.
pub fn weighted_guided_filter(
    guide: &ImagePlane,
    input: &ImagePlane,
    params: &FilterParams,
) -> Result<(ImagePlane, LinearCoeffs)> {
    params.validate()?;
    guide.ensure_same_dims(input)?;
    let weights = edge_weight(guide, params.zeta)?;
    weighted_guided_filter_with(guide, input, params, &weights)
}

/// [`weighted_guided_filter`] with precomputed edge weights.
pub fn weighted_guided_filter_with(
    guide: &ImagePlane,
    input: &ImagePlane,
    params: &FilterParams,
    weights: &EdgeWeightMap,
) -> Result<(ImagePlane, LinearCoeffs)> {
    params.validate()?;
    guide.ensure_same_dims(&weights.gamma)?;
    let eps = params.epsilon;
    let gamma = weights.gamma.samples();
    solve_linear_model(guide, input, params.radius, |k| eps / gamma[k])
}
