//! Writes the bundled synthetic corpus as PNG files.
//!
//! `cargo run --example write_corpus -- <dir>`

use std::path::PathBuf;

use wgif_retinex::raster::save_image;
use wgif_retinex::synthetic::corpus;

fn main() -> wgif_retinex::Result<()> {
    let dir = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("corpus"));
    std::fs::create_dir_all(&dir).map_err(|source| wgif_retinex::Error::Write {
        path: dir.clone(),
        source,
    })?;
    for (name, img) in corpus() {
        let path = dir.join(format!("{name}.png"));
        save_image(&img, &path)?;
        println!("{}", path.display());
    }
    Ok(())
}
