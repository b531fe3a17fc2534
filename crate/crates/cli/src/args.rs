use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Parser)]
#[command(name = "stressflex", version, about = "Stress-flex experiments on coned polytope tensegrities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Full report for one coned polytope.
    Analyze(AnalyzeArgs),
    /// Maximum stress-flex residual over a range of seeds.
    Sweep(SweepArgs),
    /// Compare a coned polytope before and after sliding its vertices toward the apex.
    Slide(SlideArgs),
    /// Shadow test: project to one dimension lower and check the two height conditions.
    Project(ProjectArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Built-in polytope: tetrahedron, cube, cuboctahedron, rhombic_dodecahedron, hypercube4.
    #[arg(long, conflicts_with_all = ["off", "random_simple"])]
    pub model: Option<String>,
    /// Polytope in OFF format.
    #[arg(long, value_name = "PATH", conflicts_with = "random_simple")]
    pub off: Option<PathBuf>,
    /// Intersection of random halfspaces, seeded by --seed.
    #[arg(long)]
    pub random_simple: bool,
    /// Number of halfspaces for --random-simple.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(4..))]
    pub planes: u64,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Relative singular-value threshold for numerical rank.
    #[arg(long, default_value_t = 1e-9)]
    pub tol_rank: f64,
    /// Relative residual at or below which a condition holds.
    #[arg(long, default_value_t = 1e-8)]
    pub tol_residual: f64,
    #[arg(long, value_enum, default_value_t = LabelingArg::Tensegrity)]
    pub labeling: LabelingArg,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Include wall-clock time (reports are then no longer byte-reproducible).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// centroid, interior-random, exterior-random, or explicit coordinates x,y,z[,w].
    #[arg(long, default_value = "centroid", allow_hyphen_values = true)]
    pub apex: String,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Apex strategy; `interior` and `exterior` are accepted for the random strategies.
    #[arg(long, default_value = "interior-random", allow_hyphen_values = true)]
    pub apex: String,
    /// Number of consecutive seeds, starting at --seed.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub count: u64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SlideArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value = "centroid", allow_hyphen_values = true)]
    pub apex: String,
    /// Use slide factors of 1 instead of seeded random ones.
    #[arg(long)]
    pub unit_factors: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ProjectArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LabelingArg {
    Tensegrity,
    Bars,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}
