use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "speclab", version, about = "Spectral, counting and approximation experiments")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// JSON document whose keys fill in flags that are not given.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output root; SPECLAB_OUT takes precedence.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Subdirectory of the output root; defaults to the command name.
    #[arg(long, global = true)]
    pub experiment: Option<String>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Tiled Hölder bump: samples and a membership certificate.
    Bump(BumpArgs),
    /// Closed-form bounds with high-precision cross-checks.
    Bounds(BoundsArgs),
    /// Bound states of −ψ″ − ω²Qψ = −ξ²ψ on the half-line.
    Spectrum(SpectrumArgs),
    /// Potential rebuilt from one spectrum by the determinant formula.
    Reconstruct(ReconstructArgs),
    /// Reconstruction error over a list of ω.
    Convergence(ConvergenceArgs),
    /// Best n-term exponential fit of the alternating bump.
    ExpsumProbe(ExpsumArgs),
    /// Attained sign vectors of random polynomial systems.
    Signcount(SigncountArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct BumpArgs {
    #[arg(long)]
    pub l: Option<f64>,
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long)]
    pub r: Option<usize>,
    /// Signs per cell, row-major; drawn from the seed when absent.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub eps: Option<Vec<i8>>,
    /// Membership grid spacing; defaults to 0.05/r.
    #[arg(long)]
    pub grid_step: Option<f64>,
    #[arg(long)]
    pub pairs: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Samples per cell and axis in the CSV; odd values hit the centres.
    #[arg(long)]
    pub per_cell: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct BoundsArgs {
    #[command(subcommand)]
    pub target: BoundsTarget,
}

#[derive(Debug, Clone, Subcommand)]
pub enum BoundsTarget {
    /// (4edq/n)^n and the unattained-sequence thresholds.
    Warren(WarrenArgs),
    /// Cell and complement counts for exponential-polynomial systems.
    Khovanskii(KhovanskiiArgs),
    /// C′/(N log₂N)^{l/s} and the truncation degree behind it.
    Floor(FloorArgs),
    /// Lower-bound constants of the Hölder class.
    Constants(ConstantsArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct WarrenArgs {
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub d: Option<u64>,
    #[arg(long)]
    pub q: Option<u64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct KhovanskiiArgs {
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub k: Option<u64>,
    #[arg(long)]
    pub d: Option<u64>,
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long)]
    pub l: Option<f64>,
    #[arg(long)]
    pub s: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct FamilyArgs {
    /// Every growth parameter equal to 1.
    #[arg(long)]
    pub all_ones: bool,
    #[arg(long = "A")]
    pub a: Option<f64>,
    #[arg(long)]
    pub u: Option<f64>,
    #[arg(long)]
    pub v: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long = "B")]
    pub big_b: Option<f64>,
    #[arg(long)]
    pub r: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    Uniform,
    L1,
    Both,
}

#[derive(Debug, Clone, Default, Args)]
pub struct FloorArgs {
    #[arg(long = "N")]
    pub n: Option<u64>,
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long)]
    pub l: Option<f64>,
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long, value_enum)]
    pub case: Option<CaseArg>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ConstantsArgs {
    #[arg(long)]
    pub l: Option<f64>,
    #[arg(long)]
    pub s: Option<usize>,
    /// Also report C′ for the family with this N.
    #[arg(long = "N")]
    pub n: Option<u64>,
    #[command(flatten)]
    pub family: FamilyArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SpectrumArgs {
    /// q1, squarewell, an inline JSON object or a path to one.
    #[arg(long)]
    pub potential: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub omega: Option<Vec<f64>>,
    /// Add the semiclassical comparison.
    #[arg(long)]
    pub wkb: bool,
    #[arg(long)]
    pub grid_step: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ReconstructArgs {
    #[arg(long)]
    pub potential: Option<String>,
    #[arg(long)]
    pub omega: Option<f64>,
    /// Spectrum JSON to use instead of solving.
    #[arg(long)]
    pub spectrum: Option<PathBuf>,
    #[arg(long)]
    pub x_max: Option<f64>,
    /// Grid intervals on [0, x_max]; must be even.
    #[arg(long)]
    pub intervals: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ConvergenceArgs {
    #[arg(long)]
    pub potential: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub omega: Option<Vec<f64>>,
    #[arg(long)]
    pub x_max: Option<f64>,
    #[arg(long)]
    pub intervals: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ExpsumArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub l: Option<f64>,
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Sample points on [0, 1] for the fit and the uniform error.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub max_iters: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignMode {
    Exact,
    Sampling,
    /// Zero counts of random constant-coefficient exponential sums.
    Expsum,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SigncountArgs {
    #[arg(long, value_enum)]
    pub mode: Option<SignMode>,
    #[arg(long)]
    pub instances: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub half_width: Option<f64>,
}
