//! Image representation and the 8-bit I/O boundary.
//!
//! All math in this crate runs on [`ImagePlane`]s of `f64` samples nominally
//! in `[0, 1]`. Decoding divides 8-bit values by 255; encoding clamps, scales
//! by 255 and rounds half up.

use std::f64::consts::PI;
use std::path::Path;

use image::{ColorType, ImageReader};

use crate::error::{Error, Result};

/// A single-channel, row-major grid of real samples.
#[derive(Clone, Debug, PartialEq)]
pub struct ImagePlane {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl ImagePlane {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::param("dimensions", format!("{width}x{height} is empty")));
        }
        if data.len() != width * height {
            return Err(Error::param(
                "data",
                format!("{} samples for a {width}x{height} plane", data.len()),
            ));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// Plane with every sample equal to `value`.
    ///
    /// Panics if either dimension is zero.
    pub fn filled(width: usize, height: usize, value: f64) -> Self {
        assert!(width > 0 && height > 0, "empty plane");
        Self {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    /// Plane whose sample at column `x`, row `y` is `f(x, y)`.
    ///
    /// Panics if either dimension is zero.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        assert!(width > 0 && height > 0, "empty plane");
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            data,
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn samples(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn samples_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: f64) {
        self.data[y * self.width + x] = value;
    }

    pub fn row(&self, y: usize) -> &[f64] {
        &self.data[y * self.width..(y + 1) * self.width]
    }

    pub fn same_dims(&self, other: &ImagePlane) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub fn ensure_same_dims(&self, other: &ImagePlane) -> Result<()> {
        if self.same_dims(other) {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left_width: self.width,
                left_height: self.height,
                right_width: other.width,
                right_height: other.height,
            })
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> ImagePlane {
        ImagePlane {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise combination of two planes of equal size.
    pub fn zip_map(&self, other: &ImagePlane, f: impl Fn(f64, f64) -> f64) -> Result<ImagePlane> {
        self.ensure_same_dims(other)?;
        Ok(ImagePlane {
            width: self.width,
            height: self.height,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn clamp01(&self) -> ImagePlane {
        self.map(|v| v.clamp(0.0, 1.0))
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }

    /// Population variance.
    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.data.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / self.data.len() as f64
    }

    /// Population standard deviation.
    pub fn std_dev(&self) -> f64 {
        self.variance().sqrt()
    }

    pub fn min(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn transpose(&self) -> ImagePlane {
        ImagePlane::from_fn(self.height, self.width, |x, y| self.get(y, x))
    }

    /// Largest absolute pointwise difference; `INFINITY` on size mismatch.
    pub fn max_abs_diff(&self, other: &ImagePlane) -> f64 {
        if !self.same_dims(other) {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Three aligned planes holding the R, G and B channels.
#[derive(Clone, Debug, PartialEq)]
pub struct ColorImage {
    pub r: ImagePlane,
    pub g: ImagePlane,
    pub b: ImagePlane,
    /// Bits per channel of the decoded source. Only 8 is supported.
    pub source_depth: u8,
}

impl ColorImage {
    pub fn new(r: ImagePlane, g: ImagePlane, b: ImagePlane) -> Result<Self> {
        r.ensure_same_dims(&g)?;
        r.ensure_same_dims(&b)?;
        Ok(Self {
            r,
            g,
            b,
            source_depth: 8,
        })
    }

    /// Replicates one plane into all three channels.
    pub fn from_gray(plane: ImagePlane) -> Self {
        Self {
            r: plane.clone(),
            g: plane.clone(),
            b: plane,
            source_depth: 8,
        }
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> [f64; 3],
    ) -> Self {
        let mut r = Vec::with_capacity(width * height);
        let mut g = Vec::with_capacity(width * height);
        let mut b = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                let [pr, pg, pb] = f(x, y);
                r.push(pr);
                g.push(pg);
                b.push(pb);
            }
        }
        let plane = |data| ImagePlane::new(width, height, data).expect("non-empty dimensions");
        Self {
            r: plane(r),
            g: plane(g),
            b: plane(b),
            source_depth: 8,
        }
    }

    pub fn width(&self) -> usize {
        self.r.width()
    }

    pub fn height(&self) -> usize {
        self.r.height()
    }

    pub fn channels(&self) -> [&ImagePlane; 3] {
        [&self.r, &self.g, &self.b]
    }

    pub fn pixel(&self, x: usize, y: usize) -> [f64; 3] {
        [self.r.get(x, y), self.g.get(x, y), self.b.get(x, y)]
    }

    /// Applies `f` to each channel independently.
    pub fn map_channels(&self, mut f: impl FnMut(&ImagePlane) -> ImagePlane) -> ColorImage {
        ColorImage {
            r: f(&self.r),
            g: f(&self.g),
            b: f(&self.b),
            source_depth: self.source_depth,
        }
    }

    /// True when every pixel has R == G == B exactly.
    pub fn is_gray(&self) -> bool {
        self.r.samples() == self.g.samples() && self.g.samples() == self.b.samples()
    }

    pub fn clamp01(&self) -> ColorImage {
        self.map_channels(ImagePlane::clamp01)
    }

    /// Round-trips through 8-bit quantization.
    pub fn quantized(&self) -> ColorImage {
        self.map_channels(|p| p.map(|v| decode_sample(encode_sample(v))))
    }

    /// Interleaved RGB bytes, clamped and rounded half up.
    pub fn to_rgb8(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.r.len() * 3);
        for ((&r, &g), &b) in self
            .r
            .samples()
            .iter()
            .zip(self.g.samples())
            .zip(self.b.samples())
        {
            out.extend_from_slice(&[encode_sample(r), encode_sample(g), encode_sample(b)]);
        }
        out
    }
}

#[inline]
pub fn decode_sample(byte: u8) -> f64 {
    byte as f64 / 255.0
}

/// Clamps to `[0, 1]`, scales by 255 and rounds half up.
#[inline]
pub fn encode_sample(v: f64) -> u8 {
    let v = if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) };
    (v * 255.0 + 0.5).floor() as u8
}

/// Decodes an 8-bit gray or RGB PNG/JPEG/PNM file.
pub fn load_image(path: impl AsRef<Path>) -> Result<ColorImage> {
    let path = path.as_ref();
    let decode_err = |reason: String| Error::Decode {
        path: path.to_path_buf(),
        reason,
    };
    let reader = ImageReader::open(path)
        .map_err(|source| Error::Read {
            path: path.to_path_buf(),
            source,
        })?
        .with_guessed_format()
        .map_err(|source| Error::Read {
            path: path.to_path_buf(),
            source,
        })?;
    let img = reader.decode().map_err(|e| decode_err(e.to_string()))?;
    let (width, height) = (img.width() as usize, img.height() as usize);
    if width == 0 || height == 0 {
        return Err(decode_err("image has no pixels".into()));
    }
    match img.color() {
        ColorType::L8 => {
            let data = img.as_bytes().iter().map(|&v| decode_sample(v)).collect();
            let plane = ImagePlane::new(width, height, data)?;
            Ok(ColorImage::from_gray(plane))
        }
        ColorType::Rgb8 => {
            let bytes = img.as_bytes();
            Ok(ColorImage::from_fn(width, height, |x, y| {
                let i = 3 * (y * width + x);
                [
                    decode_sample(bytes[i]),
                    decode_sample(bytes[i + 1]),
                    decode_sample(bytes[i + 2]),
                ]
            }))
        }
        other => Err(decode_err(format!(
            "unsupported pixel format {other:?}: need 8-bit gray or RGB without alpha"
        ))),
    }
}

/// Encodes `img` as an 8-bit RGB PNG.
pub fn save_image(img: &ColorImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let bytes = encode_png(img).map_err(|reason| Error::Encode {
        path: path.to_path_buf(),
        reason,
    })?;
    std::fs::write(path, bytes).map_err(|source| Error::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// Encodes a single plane as an 8-bit grayscale PNG.
pub fn save_plane(plane: &ImagePlane, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let bytes = encode_plane_png(plane).map_err(|reason| Error::Encode {
        path: path.to_path_buf(),
        reason,
    })?;
    std::fs::write(path, bytes).map_err(|source| Error::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// PNG bytes for `img`; identical input always yields identical bytes.
pub fn encode_png(img: &ColorImage) -> std::result::Result<Vec<u8>, String> {
    encode_raw_png(&img.to_rgb8(), img.width(), img.height(), ColorType::Rgb8)
}

/// Grayscale PNG bytes for `plane`.
pub fn encode_plane_png(plane: &ImagePlane) -> std::result::Result<Vec<u8>, String> {
    let data: Vec<u8> = plane.samples().iter().map(|&v| encode_sample(v)).collect();
    encode_raw_png(&data, plane.width(), plane.height(), ColorType::L8)
}

fn encode_raw_png(
    data: &[u8],
    width: usize,
    height: usize,
    color: ColorType,
) -> std::result::Result<Vec<u8>, String> {
    use image::codecs::png::PngEncoder;
    use image::ImageEncoder;

    let mut out = Vec::new();
    PngEncoder::new(&mut out)
        .write_image(data, width as u32, height as u32, color.into())
        .map_err(|e| e.to_string())?;
    Ok(out)
}

/// Mean-value intensity `(R + G + B) / 3`.
pub fn rgb_to_intensity(img: &ColorImage) -> ImagePlane {
    let data = img
        .r
        .samples()
        .iter()
        .zip(img.g.samples())
        .zip(img.b.samples())
        .map(|((&r, &g), &b)| (r + g + b) / 3.0)
        .collect();
    ImagePlane {
        width: img.width(),
        height: img.height(),
        data,
    }
}

/// HSI hue of one pixel, normalized to `[0, 1)`. Achromatic pixels get 0.
pub fn hue(r: f64, g: f64, b: f64) -> f64 {
    let rg = r - g;
    let rb = r - b;
    let gb = g - b;
    let den = (rg * rg + rb * gb).sqrt();
    if den == 0.0 {
        return 0.0;
    }
    let theta = (0.5 * (rg + rb) / den).clamp(-1.0, 1.0).acos();
    let h = if b <= g { theta } else { 2.0 * PI - theta };
    h / (2.0 * PI)
}

/// Per-pixel HSI hue plane in `[0, 1)`.
pub fn extract_hue(img: &ColorImage) -> ImagePlane {
    let data = img
        .r
        .samples()
        .iter()
        .zip(img.g.samples())
        .zip(img.b.samples())
        .map(|((&r, &g), &b)| hue(r, g, b))
        .collect();
    ImagePlane {
        width: img.width(),
        height: img.height(),
        data,
    }
}

/// Lower nearest-rank percentile: the smallest sample `v` such that at least
/// `p * N` samples are `<= v`. `p` is clamped to `[0, 1]`.
pub fn percentile(plane: &ImagePlane, p: f64) -> f64 {
    let n = plane.len();
    let p = p.clamp(0.0, 1.0);
    // the 1e-9 slack keeps p*N products like 0.995*200 from rounding up a rank
    let rank = ((p * n as f64) - 1e-9).ceil().max(1.0) as usize;
    let idx = rank.min(n) - 1;
    let mut sorted = plane.samples().to_vec();
    let (_, v, _) = sorted.select_nth_unstable_by(idx, f64::total_cmp);
    *v
}
