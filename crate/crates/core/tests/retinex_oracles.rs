mod common;

use common::naive_gaussian;
use proptest::prelude::*;
use wgif_retinex::retinex::{self, RetinexParams};
use wgif_retinex::synthetic::{color_scene, darken, random_plane};
use wgif_retinex::{ColorImage, ImagePlane};

const GUARD: f64 = 1.0 / 255.0;

fn oracle_stretch(values: &[f64], k: f64) -> Vec<f64> {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
    values
        .iter()
        .map(|v| ((v - (mean - k * std)) / (2.0 * k * std)).clamp(0.0, 1.0))
        .collect()
}

fn oracle_log(p: &ImagePlane, sigma: f64) -> Vec<f64> {
    let surround = naive_gaussian(p, sigma);
    p.samples()
        .iter()
        .zip(surround.samples())
        .map(|(s, l)| (s + GUARD).ln() - (l + GUARD).ln())
        .collect()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn ssr_matches_direct_convolution() {
    let p = random_plane(30, 24, 3);
    let got = retinex::ssr(&p, 4.0, 3.0).unwrap();
    let want = oracle_stretch(&oracle_log(&p, 4.0), 3.0);
    assert!(max_diff(got.samples(), &want) < 1e-9);
}

#[test]
fn msr_matches_weighted_log_sum() {
    let p = random_plane(28, 26, 9);
    let params = RetinexParams {
        scales: vec![1.5, 3.0, 6.0],
        weights: vec![0.2, 0.3, 0.5],
        ..RetinexParams::multi_scale()
    };
    let logs: Vec<Vec<f64>> = params.scales.iter().map(|&s| oracle_log(&p, s)).collect();
    let combined: Vec<f64> = (0..p.len())
        .map(|i| (0..3).map(|k| params.weights[k] * logs[k][i]).sum())
        .collect();
    let got = retinex::msr(&p, &params).unwrap();
    assert!(max_diff(got.samples(), &oracle_stretch(&combined, params.clip_k)) < 1e-9);
}

#[test]
fn single_scale_msr_is_ssr_bitwise() {
    for seed in 0..4 {
        let p = random_plane(40, 33, seed);
        for sigma in [2.0, 15.0, 80.0] {
            let params = RetinexParams::with_scales(vec![sigma]);
            let a = retinex::msr(&p, &params).unwrap();
            let b = retinex::ssr(&p, sigma, params.clip_k).unwrap();
            let same = a
                .samples()
                .iter()
                .zip(b.samples())
                .all(|(x, y)| x.to_bits() == y.to_bits());
            assert!(same, "seed {seed} sigma {sigma}");
        }
    }
}

#[test]
fn msrcr_keeps_gray_gray() {
    let plane = random_plane(32, 32, 5);
    let out = retinex::msrcr(&ColorImage::from_gray(plane), &RetinexParams::default()).unwrap();
    assert!(out.r.max_abs_diff(&out.g) <= 1e-9);
    assert!(out.r.max_abs_diff(&out.b) <= 1e-9);
}

#[test]
fn msrcr_factor_by_hand() {
    // S_c = 0.2 of a total 0.6: 46 * ln(125 * 0.2 / (0.6 + 1/255) + 1/255)
    let expect = 46.0 * (125.0 * 0.2 / (0.6 + GUARD) + GUARD).ln();
    assert_eq!(retinex::color_restoration(0.2, 0.6, 125.0, 46.0), expect);
}

#[test]
fn constant_channel_stretches_to_half() {
    let img = ColorImage::from_gray(ImagePlane::filled(12, 9, 0.3));
    let out = retinex::ssr_color(&img, 80.0, 3.0).unwrap();
    assert!(out.r.samples().iter().all(|&v| v == 0.5));
}

#[test]
fn baselines_stay_in_unit_range_on_scenes() {
    let img = darken(&color_scene(48, 40, 2), 0.3);
    let params = RetinexParams::default();
    for out in [
        retinex::ssr_color(&img, RetinexParams::SSR_SIGMA, params.clip_k).unwrap(),
        retinex::msr_color(&img, &params).unwrap(),
        retinex::msrcr(&img, &params).unwrap(),
    ] {
        for ch in out.channels() {
            assert!(ch.min() >= 0.0 && ch.max() <= 1.0);
        }
    }
}

#[test]
fn rejects_bad_params() {
    let p = random_plane(8, 8, 0);
    let mut params = RetinexParams::default();
    params.weights.pop();
    assert!(retinex::msr(&p, &params).is_err());
    assert!(retinex::msr(&p, &RetinexParams::with_scales(vec![])).is_err());
    assert!(retinex::ssr(&p, 0.0, 3.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn msrcr_is_finite_on_tiny_images(
        data in proptest::collection::vec(0.0f64..=1.0, 48),
    ) {
        let [r, g, b] = [0, 1, 2].map(|c| {
            ImagePlane::new(4, 4, (0..16).map(|i| data[3 * i + c]).collect()).unwrap()
        });
        let img = ColorImage::new(r, g, b).unwrap();
        let out = retinex::msrcr(&img, &RetinexParams::default()).unwrap();
        for ch in out.channels() {
            prop_assert!(ch.samples().iter().all(|v| v.is_finite() && (0.0..=1.0).contains(v)));
        }
    }
}
