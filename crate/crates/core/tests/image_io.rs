use wgif_retinex::raster::{load_image, save_image, save_plane};
use wgif_retinex::synthetic::color_scene;
use wgif_retinex::{ColorImage, Error, ImagePlane};

#[test]
fn png_round_trip_is_exact_for_quantized_images() {
    let dir = tempfile::tempdir().unwrap();
    let img = color_scene(33, 21, 1).quantized();
    let path = dir.path().join("a.png");
    save_image(&img, &path).unwrap();
    let back = load_image(&path).unwrap();
    assert_eq!(back.to_rgb8(), img.to_rgb8());
    assert_eq!(back, img);
}

#[test]
fn gray_png_replicates_channels() {
    let dir = tempfile::tempdir().unwrap();
    let plane = ImagePlane::from_fn(10, 6, |x, y| ((x * 6 + y) as f64 / 59.0 * 255.0).round() / 255.0);
    let path = dir.path().join("g.png");
    save_plane(&plane, &path).unwrap();
    let back = load_image(&path).unwrap();
    assert!(back.is_gray());
    assert_eq!(back.r, plane);
}

#[test]
fn pnm_files_load() {
    let dir = tempfile::tempdir().unwrap();
    let ppm = dir.path().join("a.ppm");
    std::fs::write(&ppm, b"P3\n2 1\n255\n255 0 0  0 128 255\n").unwrap();
    let img = load_image(&ppm).unwrap();
    assert_eq!(img.to_rgb8(), vec![255, 0, 0, 0, 128, 255]);

    let pgm = dir.path().join("a.pgm");
    std::fs::write(&pgm, b"P2\n2 2\n255\n0 64\n128 255\n").unwrap();
    let img = load_image(&pgm).unwrap();
    assert!(img.is_gray());
    assert_eq!(img.r.get(1, 0), 64.0 / 255.0);
}

#[test]
fn corrupt_and_missing_files_are_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.png");
    std::fs::write(&bad, b"definitely not an image").unwrap();
    assert!(matches!(load_image(&bad), Err(Error::Decode { .. })));
    assert!(matches!(
        load_image(dir.path().join("missing.png")),
        Err(Error::Read { .. })
    ));
}

#[test]
fn alpha_images_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rgba.png");
    image::RgbaImage::new(3, 3).save(&path).unwrap();
    let err = load_image(&path).unwrap_err();
    assert!(err.to_string().contains("Rgba8"), "{err}");
}

#[test]
fn out_of_range_samples_are_clamped_on_save() {
    let dir = tempfile::tempdir().unwrap();
    let img = ColorImage::from_fn(2, 1, |x, _| if x == 0 { [-0.5, 1.5, f64::NAN] } else { [0.5, 0.5, 0.5] });
    let path = dir.path().join("c.png");
    save_image(&img, &path).unwrap();
    assert_eq!(load_image(&path).unwrap().to_rgb8(), vec![0, 255, 0, 128, 128, 128]);
}
