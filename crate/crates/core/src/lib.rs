//! Low-light image enhancement built on the weighted guided image filter.
//!
//! The crate works on real-valued planes in `[0, 1]` and converts to and from
//! 8-bit data only at the I/O boundary. It is split into:
//!
//! - [`raster`]: planes, color images, 8-bit I/O, intensity and hue extraction.
//! - [`filters`]: O(N) box mean, Gaussian surround, bilateral, guided filter
//!   (GIF) and weighted guided filter (WGIF).
//! - [`retinex`]: SSR, MSR and MSRCR baselines.
//! - [`pipeline`]: the WGIF enhancement pipeline with linear color restoration.
//! - [`metrics`]: entropy, brightness, contrast, average gradient, edge
//!   intensity, std x gray and the ΔB/ΔC/ΔH change rates.
//! - [`synthetic`]: deterministic test scenes used by the test suites and CLI
//!   checks.
//!
//! ```no_run
//! use wgif_retinex::{pipeline, raster};
//!
//! let img = raster::load_image("dark.png").unwrap();
//! let (out, stages) = pipeline::enhance(&img, &pipeline::PipelineConfig::default()).unwrap();
//! println!("gamma a = {:.4}, sigmoid b = {:.4}", stages.gamma_a, stages.sigmoid_b);
//! raster::save_image(&out, "bright.png").unwrap();
//! ```

pub mod error;
pub mod filters;
pub mod metrics;
pub mod pipeline;
pub mod raster;
pub mod retinex;
pub mod synthetic;

pub use error::{Error, Result};
pub use raster::{ColorImage, ImagePlane};
