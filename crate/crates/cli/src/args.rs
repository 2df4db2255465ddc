use std::path::PathBuf;

use clap::{Args, ValueEnum};

use fextq::bandwidth::BandwidthGrid;
use fextq::{CovariateKernel, ResponseKernel, ResponseTransform, SemiMetricKind};

use crate::CliError;

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TransformArg {
    Identity,
    ReciprocalPercent,
}

impl From<TransformArg> for ResponseTransform {
    fn from(t: TransformArg) -> Self {
        match t {
            TransformArg::Identity => ResponseTransform::Identity,
            TransformArg::ReciprocalPercent => ResponseTransform::ReciprocalPercent,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum GammaEstimator {
    Hill,
    Pickands,
    PhiP,
    PhiPqr,
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Curves CSV: one curve per row, optional `t=<v>` header row.
    #[arg(long)]
    pub curves: PathBuf,
    /// Responses CSV: one value per row.
    #[arg(long)]
    pub responses: PathBuf,
    #[arg(long, value_enum, default_value = "identity")]
    pub transform: TransformArg,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct QueryArgs {
    /// Use curve `i` (0-based) of the dataset as the query.
    #[arg(long)]
    pub x_row: Option<usize>,
    /// Read the query curve from the first row of a curves CSV.
    #[arg(long)]
    pub x_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SmoothingArgs {
    /// Covariate bandwidth; selected by cross-validation when absent.
    #[arg(long)]
    pub h: Option<f64>,
    /// Response bandwidth.
    #[arg(long, default_value_t = 0.1)]
    pub lambda: f64,
    #[arg(long, default_value = "paper")]
    pub kernel: CovariateKernel,
    #[arg(long, default_value = "triangular")]
    pub qkernel: ResponseKernel,
    #[arg(long, default_value = "l2")]
    pub semimetric: SemiMetricKind,
    /// Cross-validation grid `lo:hi:M` (default 0.01:0.1:20).
    #[arg(long, conflicts_with = "auto_grid")]
    pub grid: Option<String>,
    /// Cross-validation grid from the 1%-25% quantiles of pairwise distances.
    #[arg(long)]
    pub auto_grid: bool,
    /// Number of values in the `--auto-grid` grid.
    #[arg(long, default_value_t = 20)]
    pub grid_size: usize,
}

#[derive(Debug, Args)]
pub struct TailArgs {
    #[arg(long, value_enum, default_value = "hill")]
    pub gamma_estimator: GammaEstimator,
    /// Explicit weights `tau_1 = 1 > tau_2 > ... > 0`, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub taus: Option<Vec<f64>>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub r: Option<f64>,
    /// Weights `tau_j = (1/j)^s` when `--taus` is absent.
    #[arg(long, default_value_t = 2.0)]
    pub s: f64,
    /// Number of weights when `--taus` is absent.
    #[arg(long = "J", default_value_t = 5)]
    pub j: usize,
}

#[derive(Debug, Args)]
pub struct AnchorArgs {
    /// Anchor order; defaults to `c log(n) / n`.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// The `c` in `alpha = c log(n) / n`.
    #[arg(long, default_value_t = 20.0)]
    pub alpha_c: f64,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub query: QueryArgs,
    #[command(flatten)]
    pub smoothing: SmoothingArgs,
    #[command(flatten)]
    pub tail: TailArgs,
    #[command(flatten)]
    pub anchor: AnchorArgs,
    /// Response level for `csf`.
    #[arg(long)]
    pub y: Option<f64>,
    /// Write a JSON summary here.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct WeissmanArgs {
    #[command(flatten)]
    pub base: EstimateArgs,
    /// Target order; defaults to `5 / n`.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Use this tail index instead of estimating it.
    #[arg(long)]
    pub gamma: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CvArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub smoothing: SmoothingArgs,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Run the Burr replication study (currently the only mode).
    #[arg(long)]
    pub table2: bool,
    #[arg(long, value_delimiter = ',', default_value = "5,10,15,20")]
    pub c: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,10")]
    pub s: Vec<f64>,
    #[arg(long = "J", value_delimiter = ',', default_value = "5")]
    pub j: Vec<usize>,
    /// Replications.
    #[arg(long = "N", default_value_t = 50)]
    pub replications: usize,
    /// Sample size per replication.
    #[arg(long, default_value_t = 500)]
    pub n: usize,
    /// Target order is `beta_factor / n`.
    #[arg(long, default_value_t = 5.0)]
    pub beta_factor: f64,
    /// Root seed; required when the `CI` environment variable is set.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_delimiter = ',', default_value = "l2,normdiff")]
    pub semimetric: Vec<SemiMetricKind>,
    #[arg(long, default_value_t = 0.1)]
    pub lambda: f64,
    #[arg(long, default_value = "paper")]
    pub kernel: CovariateKernel,
    /// Grid points per simulated curve.
    #[arg(long, default_value_t = 100)]
    pub m: usize,
    /// Cross-validation grid `lo:hi:M`.
    #[arg(long, default_value = "0.01:0.1:20")]
    pub grid: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub smoothing: SmoothingArgs,
    #[command(flatten)]
    pub tail: TailArgs,
    #[command(flatten)]
    pub anchor: AnchorArgs,
    /// Segment start row; defaults to the most distant pair.
    #[arg(long, requires = "i1")]
    pub i0: Option<usize>,
    /// Segment end row.
    #[arg(long, requires = "i0")]
    pub i1: Option<usize>,
    #[arg(long, default_value_t = 11)]
    pub xi_steps: usize,
    /// Target order; defaults to `5 / n`.
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

/// Parses `lo:hi:M`.
pub fn parse_grid(spec: &str) -> Result<BandwidthGrid<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || CliError::usage(format!("--grid expects lo:hi:M, got `{spec}`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let m: usize = parts[2].trim().parse().map_err(|_| bad())?;
    Ok(BandwidthGrid::regular(lo, hi, m)?)
}
