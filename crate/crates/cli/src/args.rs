use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand};
use pvmeta::SampleSize;

use crate::grid::GridSpec;
use crate::table::Format;

#[derive(Debug, Parser)]
#[command(
    name = "pvmeta",
    version,
    about = "Meta-distribution of p-values: densities, p-hacking curves, Monte Carlo checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Density of the p-value on a grid, one column per median.
    Pdf(CurveArgs),
    /// Cumulative distribution on a grid, one column per median.
    Cdf(CurveArgs),
    /// Expected minimum p-value over m = 1..mmax trials.
    Hack(HackArgs),
    /// Mean, spread and quantiles for one parameter set, or the sample-size sweep.
    Stats(StatsArgs),
    /// Projected-power density on a grid of β_c.
    Power(PowerArgs),
    /// Monte Carlo histogram and KS distance against the analytic distribution.
    McCheck(McCheckArgs),
    /// Write the four figure tables into a directory.
    Figures(FiguresArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Output file (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Absolute and relative quadrature tolerance.
    #[arg(long)]
    pub quad_tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// Median p-value(s), comma separated.
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    pub pm: Vec<f64>,
    /// Sample size: an integer or `limit`.
    #[arg(long, default_value = "limit")]
    pub n: SampleSize,
    #[arg(long, default_value = "0.001:0.999:999")]
    pub grid: GridSpec,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct HackArgs {
    #[arg(long)]
    pub pm: f64,
    #[arg(long, default_value = "limit")]
    pub n: SampleSize,
    /// Largest number of trials.
    #[arg(long, visible_alias = "m", default_value_t = 20)]
    pub mmax: u32,
    /// Add Monte Carlo mean and standard error columns.
    #[arg(long)]
    pub mc: bool,
    #[arg(long, default_value_t = 1_000_000)]
    pub draws: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("target").required(true).args(["pm", "mean", "sweep_n"])))]
pub struct StatsArgs {
    #[arg(long)]
    pub pm: Option<f64>,
    /// Target mean p-value; the median is solved for.
    #[arg(long)]
    pub mean: Option<f64>,
    #[arg(long, default_value = "limit")]
    pub n: SampleSize,
    /// Tabulate the headline dispersion figures over these sample sizes
    /// (comma separated; `default` for 2,3,5,10,20,30,100,1000,limit).
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub sweep_n: Option<Vec<String>>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PowerArgs {
    /// The observed p-value p_s, in (1/2, 1).
    #[arg(long)]
    pub ps: f64,
    #[arg(long)]
    pub n: u32,
    /// The default grid steps over β_c = 1/2, where the density is undefined.
    #[arg(long, default_value = "0.0005:0.9995:1000")]
    pub grid: GridSpec,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("target").required(true).args(["pm", "mean"])))]
pub struct McCheckArgs {
    #[arg(long)]
    pub pm: Option<f64>,
    #[arg(long)]
    pub mean: Option<f64>,
    #[arg(long, default_value = "limit")]
    pub n: SampleSize,
    /// Trials per draw; the minimum p-value is recorded.
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    #[arg(long, default_value_t = 1_000_000)]
    pub draws: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub bins: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FiguresArgs {
    /// Output directory (created if missing).
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    pub draws: usize,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub quad_tol: Option<f64>,
}
