use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "bisym",
    version,
    about = "Sample-based checks for bisymmetric binary maps",
    long_about = "Sample-based checks for bisymmetric binary maps.\n\n\
        Exit codes: 0 clean, 1 a property fails or evaluation failed, \
        2 a dichotomy hypothesis is violated, 3 inconclusive dichotomy, \
        64 usage error, 65 map source does not parse."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the axiom checkers on a sample grid.
    Check(CheckArgs),
    /// Classify the map as symmetric everywhere, nowhere symmetric, or in
    /// violation of the hypotheses that force one of the two.
    Dichotomy(DichotomyArgs),
    /// Build the dyadic generator table and rebuild the map from it.
    Extract(ExtractArgs),
    /// Enumerate expression trees and their values at two seeds.
    Enumerate(EnumerateArgs),
    /// Evaluate the map at one point.
    Eval(EvalArgs),
}

#[derive(Debug, Clone, Args)]
#[group(id = "source", multiple = false)]
pub struct MapSource {
    /// Built-in map, e.g. arithmetic, power(2), exponential(1), min,
    /// projection-left, paper-example-1.
    #[arg(long, value_name = "NAME")]
    pub map: Option<String>,
    /// File holding a map written in the map language.
    #[arg(long, value_name = "PATH")]
    pub dsl_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Domain of the map. Defaults to the built-in's natural domain, or
    /// [0, 1] for map files.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    pub interval: Option<Vec<f64>>,
    /// Equality tolerance; defaults to 1e-9 * max(1, HI - LO).
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Shorthand for --format json.
    #[arg(long, conflicts_with = "format")]
    pub json: bool,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

impl Common {
    pub fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else {
            self.format
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Axiom {
    Reflexive,
    PartiallyStrictlyIncreasing,
    Symmetric,
    Bisymmetric,
    Cancellative,
    Mean,
    Codomain,
}

impl Axiom {
    pub const DEFAULT: [Axiom; 6] = [
        Axiom::Reflexive,
        Axiom::PartiallyStrictlyIncreasing,
        Axiom::Symmetric,
        Axiom::Bisymmetric,
        Axiom::Cancellative,
        Axiom::Mean,
    ];
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub source: MapSource,
    #[command(flatten)]
    pub common: Common,
    /// Points per axis for pairwise checks.
    #[arg(long, default_value_t = 101)]
    pub n: usize,
    /// Points per axis for the quadruple (bisymmetry) sweep.
    #[arg(long, default_value_t = 33)]
    pub quad_n: usize,
    /// Grid jitter seed; 0 is the uniform grid.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated subset of properties to check.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub axioms: Vec<Axiom>,
    /// Check min < F(x, y) < max for x != y instead of the closed bounds.
    #[arg(long)]
    pub strict_mean: bool,
}

#[derive(Debug, Args)]
pub struct DichotomyArgs {
    #[command(flatten)]
    pub source: MapSource,
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 101)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[command(flatten)]
    pub source: MapSource,
    #[command(flatten)]
    pub common: Common,
    /// Seed mapped to 0; defaults to the domain's lower end.
    #[arg(long, allow_negative_numbers = true)]
    pub u: Option<f64>,
    /// Seed mapped to 1; defaults to the domain's upper end.
    #[arg(long, allow_negative_numbers = true)]
    pub v: Option<f64>,
    #[arg(long, default_value_t = 12)]
    pub depth: u32,
    /// Points per axis of the residual grid on [u, v].
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
    /// Also write the full table (index, dyadic, value) to this CSV file.
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    /// Map whose values are computed; defaults to arithmetic.
    #[command(flatten)]
    pub source: MapSource,
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    #[arg(long, allow_negative_numbers = true)]
    pub u: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub v: Option<f64>,
    /// Include every tree in `F(u,v)` notation (depth 4 at most).
    #[arg(long)]
    pub list_trees: bool,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub source: MapSource,
    #[command(flatten)]
    pub common: Common,
    #[arg(long, allow_negative_numbers = true)]
    pub x: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub y: f64,
}
