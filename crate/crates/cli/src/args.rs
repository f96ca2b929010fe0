use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "sharpmin", version, about = "Sharp-minimizer analysis on clouds, grids, metric spaces and trees")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Growth modulus, slope infimum and tilt radius of a cloud, grid or fixture.
    Analyze(AnalyzeArgs),
    /// Discrete conjugate, biconjugate and convex envelope of a grid.
    Transform(TransformArgs),
    /// Argmin of a tilted or Lipschitz-perturbed function.
    Probe(ProbeArgs),
    /// Local sharpness and checks on a finite metric space or a metric tree.
    Metric(MetricArgs),
    /// Surface meshes of a 2D function, its tilt and its fitted cone.
    Mesh(MeshArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Input JSON file.
    #[arg(long)]
    pub input: PathBuf,
    /// Output directory (created if missing).
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Exact-path tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub common: Common,
    /// Grid steps for a refinement study of a fixture, strictly decreasing.
    #[arg(long, value_delimiter = ',')]
    pub refine: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[command(flatten)]
    pub common: Common,
    /// Dual half-width per axis, or one value for all axes. Chosen from the slopes when omitted.
    #[arg(long, value_delimiter = ',')]
    pub dual_range: Vec<f64>,
    /// Dual nodes per axis.
    #[arg(long)]
    pub dual_resolution: Option<usize>,
    /// Grid steps for a refinement study of a fixture, strictly decreasing.
    #[arg(long, value_delimiter = ',')]
    pub refine: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[command(flatten)]
    pub common: Common,
    /// Tilt vector `x,y[,z]`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub tilt: Vec<f64>,
    /// Tilt of this magnitude pointing at the modulus witness.
    #[arg(long)]
    pub tilt_witness: Option<f64>,
    /// Perturbation JSON file.
    #[arg(long)]
    pub perturbation: Option<PathBuf>,
    /// Functional JSON file, for metric-space and tree inputs.
    #[arg(long)]
    pub functional: Option<PathBuf>,
    /// Ball radius for local probes; the whole space when omitted.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Sharpness parameter for metric probes; the local modulus when omitted.
    #[arg(long)]
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Cat0,
    Gconv,
    Prop2,
    Thm2,
}

#[derive(Debug, Args)]
pub struct MetricArgs {
    #[command(flatten)]
    pub common: Common,
    /// Functional JSON file.
    #[arg(long)]
    pub functional: Option<PathBuf>,
    /// Ball radius; the whole space when omitted.
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// `eps,lambda,start`
    #[arg(long, value_delimiter = ',')]
    pub ekeland: Vec<f64>,
    #[arg(long, value_enum)]
    pub check: Option<Check>,
    /// Random samples for the sampled checks.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Slope radii for the prop2 check, strictly decreasing.
    #[arg(long, value_delimiter = ',')]
    pub refine: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct MeshArgs {
    #[command(flatten)]
    pub common: Common,
    /// Tilt vector `x,y`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub tilt: Vec<f64>,
    /// Skip the fitted cone surface.
    #[arg(long)]
    pub no_cone: bool,
}
