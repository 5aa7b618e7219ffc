//! Comparison report tables.
//!
//! Color inputs get the columns
//! `image,algorithm,entropy,delta_b,delta_c,delta_h,avg_gradient,edge_intensity,std_gray,time_ms`
//! and gray inputs
//! `image,algorithm,entropy,brightness,contrast,avg_gradient,edge_intensity,std_gray,time_ms`.
//! The `original` row leaves its change-rate and timing cells empty; a change
//! rate with a zero denominator is written as `NaN`. `time_ms` is the only
//! column that varies between runs.

use std::path::Path;

use anyhow::Context;
use wgif_retinex::metrics::MetricsReport;

use crate::ReportFormat;

pub const COLOR_HEADER: [&str; 10] = [
    "image",
    "algorithm",
    "entropy",
    "delta_b",
    "delta_c",
    "delta_h",
    "avg_gradient",
    "edge_intensity",
    "std_gray",
    "time_ms",
];

pub const GRAY_HEADER: [&str; 9] = [
    "image",
    "algorithm",
    "entropy",
    "brightness",
    "contrast",
    "avg_gradient",
    "edge_intensity",
    "std_gray",
    "time_ms",
];

pub const TIMING_HEADER: [&str; 5] = ["image", "width", "height", "linear_ms", "nonlinear_ms"];

pub struct Row {
    pub image: String,
    pub algorithm: &'static str,
    pub metrics: MetricsReport,
    pub time_ms: Option<f64>,
}

fn num(v: f64) -> String {
    format!("{v:.6}")
}

fn delta(v: Option<Option<f64>>, sci: bool) -> String {
    match v {
        None => String::new(),
        Some(None) => "NaN".to_string(),
        Some(Some(v)) if sci => format!("{v:.6e}"),
        Some(Some(v)) => num(v),
    }
}

fn color_cells(row: &Row) -> Vec<String> {
    let m = &row.metrics;
    let d = m.deltas;
    vec![
        row.image.clone(),
        row.algorithm.to_string(),
        num(m.entropy),
        delta(d.map(|d| d.delta_b), false),
        delta(d.map(|d| d.delta_c), false),
        delta(d.map(|d| d.delta_h), true),
        num(m.avg_gradient),
        num(m.edge_intensity),
        num(m.std_gray),
        row.time_ms.map(|t| format!("{t:.3}")).unwrap_or_default(),
    ]
}

fn gray_cells(row: &Row) -> Vec<String> {
    let m = &row.metrics;
    vec![
        row.image.clone(),
        row.algorithm.to_string(),
        num(m.entropy),
        num(m.brightness),
        num(m.contrast),
        num(m.avg_gradient),
        num(m.edge_intensity),
        num(m.std_gray),
        row.time_ms.map(|t| format!("{t:.3}")).unwrap_or_default(),
    ]
}

fn to_csv(header: &[&str], rows: &[Vec<String>]) -> anyhow::Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    Ok(w.into_inner()?)
}

fn to_markdown(header: &[&str], rows: &[Vec<String>]) -> Vec<u8> {
    let mut out = String::new();
    out.push_str(&format!("| {} |\n", header.join(" | ")));
    out.push_str(&format!("|{}\n", "---|".repeat(header.len())));
    for r in rows {
        let cells: Vec<&str> = r
            .iter()
            .map(|c| if c.is_empty() { "---" } else { c.as_str() })
            .collect();
        out.push_str(&format!("| {} |\n", cells.join(" | ")));
    }
    out.into_bytes()
}

/// Writes `bytes` next to `path` and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    std::fs::write(&tmp, bytes).with_context(|| format!("writing {}", tmp.display()))?;
    std::fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))
}

fn table(header: &[&str], rows: &[Vec<String>], format: ReportFormat) -> anyhow::Result<Vec<u8>> {
    match format {
        ReportFormat::Csv => to_csv(header, rows),
        ReportFormat::Markdown => Ok(to_markdown(header, rows)),
    }
}

fn extension(format: ReportFormat) -> &'static str {
    match format {
        ReportFormat::Csv => "csv",
        ReportFormat::Markdown => "md",
    }
}

/// Writes `compare_color.*` and/or `compare_gray.*` into `dir`, skipping a
/// kind with no rows. Returns the written paths.
pub fn write_compare(
    dir: &Path,
    color: &[Row],
    gray: &[Row],
    format: ReportFormat,
) -> anyhow::Result<Vec<std::path::PathBuf>> {
    let mut written = Vec::new();
    if !color.is_empty() {
        let rows: Vec<_> = color.iter().map(color_cells).collect();
        let path = dir.join(format!("compare_color.{}", extension(format)));
        write_atomic(&path, &table(&COLOR_HEADER, &rows, format)?)?;
        written.push(path);
    }
    if !gray.is_empty() {
        let rows: Vec<_> = gray.iter().map(gray_cells).collect();
        let path = dir.join(format!("compare_gray.{}", extension(format)));
        write_atomic(&path, &table(&GRAY_HEADER, &rows, format)?)?;
        written.push(path);
    }
    Ok(written)
}

pub struct TimingRow {
    pub image: String,
    pub width: usize,
    pub height: usize,
    pub linear_ms: f64,
    pub nonlinear_ms: f64,
}

pub fn write_timing(dir: &Path, rows: &[TimingRow], format: ReportFormat) -> anyhow::Result<()> {
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.image.clone(),
                r.width.to_string(),
                r.height.to_string(),
                format!("{:.4}", r.linear_ms),
                format!("{:.4}", r.nonlinear_ms),
            ]
        })
        .collect();
    let path = dir.join(format!("restore_timing.{}", extension(format)));
    write_atomic(&path, &table(&TIMING_HEADER, &cells, format)?)
}

/// CSV with one column per named series, plus the leading `x` column.
pub fn scanline_csv(names: &[&str], columns: &[Vec<f64>]) -> anyhow::Result<Vec<u8>> {
    let mut header = vec!["x"];
    header.extend_from_slice(names);
    let len = columns.first().map_or(0, Vec::len);
    let rows: Vec<Vec<String>> = (0..len)
        .map(|x| {
            std::iter::once(x.to_string())
                .chain(columns.iter().map(|c| format!("{:.4}", c[x])))
                .collect()
        })
        .collect();
    to_csv(&header, &rows)
}
