use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "sss", version, about = "Spectrum scale-space saliency")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coarse-to-fine saliency sequence for each input image.
    Sequence(SequenceArgs),
    /// Single-map reference detectors.
    Baseline(BaselineArgs),
    /// 1-D sharpness curve and suppression trace as CSV.
    Demo1d(DemoArgs),
    /// ROC/AUC of saliency maps against time-sliced fixations.
    Eval(EvalArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChannelArg {
    Gray,
    Opponent,
}

/// Flags shared by every subcommand.
#[derive(Debug, Args)]
pub struct Common {
    /// Base kernel scale in frequency bins.
    #[arg(long, default_value_t = 0.5)]
    pub t0: f64,
    /// Smooth the amplitude itself instead of its logarithm.
    #[arg(long)]
    pub linear_amplitude: bool,
    #[arg(long, value_enum, default_value_t = ChannelArg::Gray)]
    pub channel_mode: ChannelArg,
    /// Post-blur in pixels (default: 3% of the shorter side).
    #[arg(long)]
    pub post_sigma: Option<f64>,
    /// Comma-separated 1-based scale indices, or `all`.
    #[arg(long, default_value = "all")]
    pub scales: String,
    /// Resize inputs to WIDTHxHEIGHT before processing.
    #[arg(long)]
    pub resize: Option<String>,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Abort on the first bad input instead of skipping it.
    #[arg(long)]
    pub strict: bool,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SequenceArgs {
    /// Image files or directories of PNG/PGM images.
    pub inputs: Vec<PathBuf>,
    /// Comma-separated raw kernel widths in bins (overrides --scales).
    #[arg(long)]
    pub sigmas: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Pft,
    Sr,
    Ft,
    All,
}

#[derive(Debug, Args)]
pub struct BaselineArgs {
    pub inputs: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = ModelArg::All)]
    pub model: ModelArg,
    /// Local-average window of the spectral residual (odd, >= 3).
    #[arg(long, default_value_t = 3)]
    pub sr_window: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DemoPart {
    Fig7,
    Fig8,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    /// Produce only one of the two tables.
    #[arg(long, value_enum)]
    pub only: Option<DemoPart>,
    /// Background frequency of the sharpness curve (cycles per frame).
    #[arg(long, default_value_t = 32)]
    pub f_bg: usize,
    /// Comma-separated cycle counts of the sharpness curve.
    #[arg(long, default_value = "4,8,16")]
    pub cycles: String,
    /// Sharpness kernel width in bins.
    #[arg(long, default_value_t = 2.0)]
    pub h_sigma: f64,
    /// Amplitude smoothing width for the suppression trace, in bins.
    #[arg(long, default_value_t = 4.0)]
    pub sigma: f64,
    /// Samples in the suppression trace.
    #[arg(long, default_value_t = 512)]
    pub samples: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Fixation CSV (`subject_id,image_id,t_ms,x,y`).
    #[arg(long)]
    pub fixations: PathBuf,
    /// Image-bounds CSV (`image_id,width,height`).
    #[arg(long)]
    pub manifest: PathBuf,
    /// Directory holding `<image_id>_k<k>.pfm` maps.
    #[arg(long)]
    pub maps: PathBuf,
    /// Comma-separated slice edges in milliseconds, e.g. `100,400,800`.
    #[arg(long)]
    pub edges: String,
    /// Leading milliseconds to drop.
    #[arg(long, default_value_t = 100.0)]
    pub discard: f64,
    /// Fraction of pixels counted as fixated.
    #[arg(long, default_value_t = 0.05)]
    pub quantile: f64,
    /// Fixation-map blur in pixels (default: 2% of the shorter side).
    #[arg(long)]
    pub blur_sigma: Option<f64>,
    /// One ROC over all images instead of the per-image mean AUC.
    #[arg(long)]
    pub pooled: bool,
    #[command(flatten)]
    pub common: Common,
}
