//! Batch front end: enhance, compare, decompose and scanline over image files.

mod algorithm;
mod commands;
mod inputs;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use wgif_retinex::metrics::DEFAULT_BLOCK;
use wgif_retinex::pipeline::PipelineConfig;

use crate::algorithm::Algorithm;

#[derive(Parser, Debug)]
#[command(name = "wgif-retinex", version)]
#[command(about = "Low-light image enhancement with WGIF Retinex and classical baselines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enhance each input with one algorithm; writes `<stem>.<algo>.png`
    Enhance(CommonArgs),
    /// Run every algorithm on each input and write a metrics report
    Compare(CommonArgs),
    /// Write illumination estimates of GF, BF, GIF and WGIF and the GIF/WGIF
    /// illumination-reflection pairs
    Decompose(CommonArgs),
    /// Write one image row's intensity after each algorithm as CSV
    Scanline(CommonArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Image files or directories of images
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,

    #[arg(long = "algo", value_enum, default_value_t = Algorithm::Proposed)]
    pub algorithm: Algorithm,

    /// Pipeline configuration as a flat JSON object
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Output directory, created if missing
    #[arg(long = "out", default_value = ".")]
    pub out_dir: PathBuf,

    /// Row index for `scanline`
    #[arg(long, default_value_t = 30)]
    pub row: usize,

    /// Block side for the std x gray metric
    #[arg(long, default_value_t = DEFAULT_BLOCK)]
    pub block: usize,

    #[arg(long, value_enum, default_value_t = ReportFormat::Csv)]
    pub report: ReportFormat,

    /// Also time linear against nonlinear (HSI) color restoration
    #[arg(long)]
    pub time_breakdown: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Csv,
    Markdown,
}

/// Resolved settings shared by every command.
pub struct RunSpec {
    pub args: CommonArgs,
    pub config: PipelineConfig,
    pub files: Vec<PathBuf>,
}

fn prepare(args: CommonArgs) -> anyhow::Result<RunSpec> {
    let config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            PipelineConfig::from_json(&text)
                .with_context(|| format!("parsing config {}", path.display()))?
        }
        None => PipelineConfig::default(),
    };
    if args.block < 2 {
        anyhow::bail!("--block must be at least 2");
    }
    let files = inputs::collect(&args.inputs)?;
    std::fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;
    Ok(RunSpec {
        args,
        config,
        files,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (args, run): (CommonArgs, fn(&RunSpec) -> bool) = match cli.command {
        Command::Enhance(a) => (a, commands::enhance),
        Command::Compare(a) => (a, commands::compare),
        Command::Decompose(a) => (a, commands::decompose),
        Command::Scanline(a) => (a, commands::scanline),
    };
    let spec = match prepare(args) {
        Ok(spec) => spec,
        Err(err) => {
            eprintln!("error: {err:#}");
            return ExitCode::from(2);
        }
    };
    if run(&spec) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
