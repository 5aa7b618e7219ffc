use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context};
use wgif_retinex::filters::{self, FilterParams};
use wgif_retinex::metrics::MetricsReport;
use wgif_retinex::pipeline::{self, PipelineConfig};
use wgif_retinex::raster::{self, encode_plane_png, encode_png};
use wgif_retinex::{ColorImage, ImagePlane};

use crate::algorithm::Algorithm;
use crate::inputs::stem;
use crate::report::{self, Row, TimingRow};
use crate::RunSpec;

const TIMING_REPEATS: usize = 5;

fn file_label(path: &Path) -> String {
    path.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn write_png(path: &Path, img: &ColorImage) -> anyhow::Result<()> {
    let bytes = encode_png(img).map_err(|e| anyhow::anyhow!("encoding {}: {e}", path.display()))?;
    report::write_atomic(path, &bytes)
}

fn write_plane(path: &Path, plane: &ImagePlane) -> anyhow::Result<()> {
    let bytes =
        encode_plane_png(plane).map_err(|e| anyhow::anyhow!("encoding {}: {e}", path.display()))?;
    report::write_atomic(path, &bytes)
}

/// Runs `f` on every input, reporting failures on stderr. Returns true when
/// every input succeeded.
fn for_each_input(spec: &RunSpec, mut f: impl FnMut(&Path) -> anyhow::Result<()>) -> bool {
    let mut ok = true;
    for path in &spec.files {
        if let Err(err) = f(path) {
            eprintln!("error: {}: {err:#}", path.display());
            ok = false;
        }
    }
    ok
}

fn load(path: &Path) -> anyhow::Result<ColorImage> {
    Ok(raster::load_image(path)?)
}

pub fn enhance(spec: &RunSpec) -> bool {
    let algo = spec.args.algorithm;
    for_each_input(spec, |path| {
        let img = load(path)?;
        let out = algo.run(&img, &spec.config)?;
        let target = spec
            .args
            .out_dir
            .join(format!("{}.{}.png", stem(path), algo.name()));
        write_png(&target, &out)
    })
}

fn restore_timing(img: &ColorImage, cfg: &PipelineConfig) -> anyhow::Result<(f64, f64)> {
    let (_, stages) = pipeline::enhance(img, cfg)?;
    let mut linear = f64::INFINITY;
    let mut nonlinear = f64::INFINITY;
    for _ in 0..TIMING_REPEATS {
        let t = Instant::now();
        std::hint::black_box(pipeline::restore_color(img, &stages.gain, cfg.gain_floor)?);
        linear = linear.min(t.elapsed().as_secs_f64() * 1e3);
        let t = Instant::now();
        std::hint::black_box(pipeline::restore_color_hsi(img, &stages.s_ief)?);
        nonlinear = nonlinear.min(t.elapsed().as_secs_f64() * 1e3);
    }
    Ok((linear, nonlinear))
}

pub fn compare(spec: &RunSpec) -> bool {
    let mut color_rows = Vec::new();
    let mut gray_rows = Vec::new();
    let mut timings = Vec::new();
    let block = spec.args.block;
    let ok = for_each_input(spec, |path| {
        let img = load(path)?;
        let label = file_label(path);
        let mut rows = vec![Row {
            image: label.clone(),
            algorithm: "original",
            metrics: MetricsReport::compute(&img, None, block)?,
            time_ms: None,
        }];
        for algo in Algorithm::ALL {
            let t = Instant::now();
            let out = algo.run(&img, &spec.config)?;
            let time_ms = t.elapsed().as_secs_f64() * 1e3;
            let target = spec
                .args
                .out_dir
                .join(format!("{}.{}.png", stem(path), algo.name()));
            write_png(&target, &out)?;
            // Metrics are taken on what was written, i.e. after 8-bit rounding.
            rows.push(Row {
                image: label.clone(),
                algorithm: algo.name(),
                metrics: MetricsReport::compute(&out.quantized(), Some(&img), block)?,
                time_ms: Some(time_ms),
            });
        }
        if spec.args.time_breakdown {
            let (linear_ms, nonlinear_ms) = restore_timing(&img, &spec.config)?;
            timings.push(TimingRow {
                image: label,
                width: img.width(),
                height: img.height(),
                linear_ms,
                nonlinear_ms,
            });
        }
        if img.is_gray() {
            gray_rows.extend(rows);
        } else {
            color_rows.extend(rows);
        }
        Ok(())
    });
    let mut written = match report::write_compare(
        &spec.args.out_dir,
        &color_rows,
        &gray_rows,
        spec.args.report,
    ) {
        Ok(_) => true,
        Err(err) => {
            eprintln!("error: {err:#}");
            false
        }
    };
    if spec.args.time_breakdown {
        if let Err(err) = report::write_timing(&spec.args.out_dir, &timings, spec.args.report) {
            eprintln!("error: {err:#}");
            written = false;
        }
    }
    ok && written
}

/// x / (1 + x), for showing an unbounded reflection plane.
fn tone_map(plane: &ImagePlane) -> ImagePlane {
    plane.map(|v| {
        let v = v.max(0.0);
        v / (1.0 + v)
    })
}

pub fn decompose(spec: &RunSpec) -> bool {
    let cfg = &spec.config;
    let params: &FilterParams = &cfg.filter;
    for_each_input(spec, |path| {
        let img = load(path)?;
        let s_i = raster::rgb_to_intensity(&img);
        let base = stem(path);
        let out = |name: &str| spec.args.out_dir.join(format!("{base}.{name}.png"));

        let gf = filters::gaussian_surround(&s_i, params.radius as f64)?;
        let bf = filters::bilateral(&s_i, params.sigma, params.sigma_range)?;
        let (gif, _) = filters::guided_filter(&s_i, &s_i, params)?;
        let (wgif, _) = filters::weighted_guided_filter(&s_i, &s_i, params)?;
        write_plane(&out("illum_gf"), &gf)?;
        write_plane(&out("illum_bf"), &bf)?;
        write_plane(&out("illum_gif"), &gif)?;
        write_plane(&out("illum_wgif"), &wgif)?;

        for (name, illum) in [("gif", gif), ("wgif", wgif)] {
            let illum = illum.clamp01();
            let refl = pipeline::compute_reflection(&s_i, &illum, cfg)?;
            write_plane(&out(&format!("{name}_illumination")), &illum)?;
            write_plane(&out(&format!("{name}_reflection")), &tone_map(&refl))?;
        }
        Ok(())
    })
}

/// Intensity of one row of the 8-bit version of `img`, on the 0-255 scale.
fn row_intensity(img: &ColorImage, y: usize) -> Vec<f64> {
    let rgb = img.to_rgb8();
    let w = img.width();
    rgb[y * w * 3..(y + 1) * w * 3]
        .chunks_exact(3)
        .map(|p| (f64::from(p[0]) + f64::from(p[1]) + f64::from(p[2])) / 3.0)
        .collect()
}

pub fn scanline(spec: &RunSpec) -> bool {
    let row = spec.args.row;
    let algos = [Algorithm::Ssr, Algorithm::Msr, Algorithm::Proposed];
    for_each_input(spec, |path| {
        let img = load(path)?;
        if row >= img.height() {
            bail!("row {row} out of range for height {}", img.height());
        }
        let mut names = vec!["original"];
        let mut columns = vec![row_intensity(&img, row)];
        for algo in algos {
            let out = algo
                .run(&img, &spec.config)
                .with_context(|| format!("running {}", algo.name()))?;
            names.push(algo.name());
            columns.push(row_intensity(&out, row));
        }
        let bytes = report::scanline_csv(&names, &columns)?;
        let target = spec
            .args
            .out_dir
            .join(format!("{}.scanline_row{row}.csv", stem(path)));
        report::write_atomic(&target, &bytes)
    })
}
