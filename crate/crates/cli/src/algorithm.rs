use clap::ValueEnum;
use wgif_retinex::pipeline::{self, PipelineConfig};
use wgif_retinex::retinex::{self, RetinexParams};
use wgif_retinex::{ColorImage, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Algorithm {
    Ssr,
    Msr,
    Msrcr,
    Proposed,
}

impl Algorithm {
    /// Report order.
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Ssr,
        Algorithm::Msr,
        Algorithm::Msrcr,
        Algorithm::Proposed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Ssr => "ssr",
            Algorithm::Msr => "msr",
            Algorithm::Msrcr => "msrcr",
            Algorithm::Proposed => "proposed",
        }
    }

    pub fn run(self, img: &ColorImage, cfg: &PipelineConfig) -> Result<ColorImage> {
        match self {
            Algorithm::Ssr => {
                let p = RetinexParams::single_scale();
                retinex::ssr_color(img, RetinexParams::SSR_SIGMA, p.clip_k)
            }
            Algorithm::Msr => retinex::msr_color(img, &RetinexParams::multi_scale()),
            Algorithm::Msrcr => retinex::msrcr(img, &RetinexParams::multi_scale()),
            Algorithm::Proposed => pipeline::enhance(img, cfg).map(|(out, _)| out),
        }
    }
}
