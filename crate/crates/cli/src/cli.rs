use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "relgrowth", version, about = "Growth, cones, shadows and quotients on Cayley graphs")]
pub struct Cli {
    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Write the table here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Also write a gnuplot script plotting the table to this path.
    #[arg(long, global = true)]
    pub gnuplot: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate a ball and print sphere and ball sizes.
    Ball(BallArgs),
    /// Growth-rate estimates and partial Poincaré sums.
    Growth(GrowthArgs),
    /// Floyd distance between two elements seen from a basepoint.
    Floyd(FloydArgs),
    /// Partial cone type census and partial cone annulus counts.
    Cones(ConesArgs),
    /// Shadow masses in a free group (tree boundary model).
    Shadow(ShadowArgs),
    /// Partial shadow masses in a free group with peripheral structure.
    PartialShadow(PartialShadowArgs),
    /// Growth of power-relator quotients F/<<h^n>>.
    Quotient(QuotientArgs),
    /// The ε-containment language filter and injectivity check.
    Filter(FilterArgs),
    /// Build and verify a transitional geodesic tree.
    Tree(TreeArgs),
    /// Run the invariant suites on the bundled presentations.
    VerifyAll,
}

#[derive(Debug, Args)]
pub struct PresArgs {
    /// Presentation file, or the name of a bundled presentation
    /// (f2, f3, commutator_cube, ab_cube, surface2, z_star_z5).
    #[arg(long, default_value = "f2")]
    pub pres: String,
}

#[derive(Debug, Args)]
pub struct BudgetArgs {
    /// Stop after this many elements.
    #[arg(long)]
    pub max_elements: Option<usize>,
    /// Stop after this many seconds.
    #[arg(long)]
    pub time_limit: Option<f64>,
}

#[derive(Debug, Args)]
pub struct RelArgs {
    /// Peripheral subgroups: semicolon-separated lists of generating words,
    /// e.g. "a;b". Empty for the hyperbolic structure.
    #[arg(long, default_value = "")]
    pub peripherals: String,
    #[arg(long, default_value_t = 0)]
    pub eps: usize,
    #[arg(long = "R", default_value_t = 1)]
    pub big_r: usize,
}

#[derive(Debug, Args)]
pub struct BallArgs {
    #[command(flatten)]
    pub pres: PresArgs,
    #[arg(long, default_value_t = 6)]
    pub radius: usize,
    /// List every element as `length<TAB>word` after the table.
    #[arg(long)]
    pub words: bool,
    /// Reuse or store the ball in this cache directory.
    #[arg(long)]
    pub cache: Option<PathBuf>,
    #[command(flatten)]
    pub budget: BudgetArgs,
}

#[derive(Debug, Args)]
pub struct GrowthArgs {
    #[command(flatten)]
    pub pres: PresArgs,
    #[arg(long, default_value_t = 8)]
    pub radius: usize,
    /// Also print partial Poincaré sums at exponent s.
    #[arg(long)]
    pub s: Option<f64>,
    #[command(flatten)]
    pub budget: BudgetArgs,
}

#[derive(Debug, Args)]
pub struct FloydArgs {
    #[command(flatten)]
    pub pres: PresArgs,
    #[arg(long)]
    pub x: String,
    #[arg(long)]
    pub y: String,
    /// Basepoint (default: identity).
    #[arg(long, default_value = "")]
    pub v: String,
    #[arg(long, default_value_t = 2.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 6)]
    pub radius: usize,
}

#[derive(Debug, Args)]
pub struct ConesArgs {
    #[command(flatten)]
    pub pres: PresArgs,
    #[command(flatten)]
    pub rel: RelArgs,
    /// Largest sphere in the type census.
    #[arg(long, default_value_t = 6)]
    pub radius: usize,
    /// Horizon parameter C of the F_g data (F_g ⊂ B(1, 2C+1)).
    #[arg(long, default_value_t = 0)]
    pub c: usize,
    /// Cone annulus counts for g in B(1, cone_radius) ...
    #[arg(long, default_value_t = 2)]
    pub cone_radius: usize,
    /// ... and n = 1..=horizon.
    #[arg(long, default_value_t = 3)]
    pub horizon: usize,
    #[arg(long, default_value_t = 0)]
    pub r: usize,
    #[arg(long, default_value_t = 1)]
    pub delta: usize,
}

#[derive(Debug, Args)]
pub struct ShadowArgs {
    /// Rank of the free group.
    #[arg(long, default_value_t = 2)]
    pub rank: usize,
    #[arg(long, default_value_t = 5)]
    pub radius: usize,
    #[arg(long, default_value_t = 0)]
    pub r: usize,
    /// Print the cylinder decomposition of this element as JSON instead.
    #[arg(long)]
    pub g: Option<String>,
}

#[derive(Debug, Args)]
pub struct PartialShadowArgs {
    #[command(flatten)]
    pub shadow: ShadowArgs,
    #[command(flatten)]
    pub rel: RelArgs,
}

#[derive(Debug, Args)]
pub struct QuotientArgs {
    #[command(flatten)]
    pub pres: PresArgs,
    #[arg(long)]
    pub h: String,
    /// Exponents, comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "2,3,4,6")]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 8)]
    pub radius: usize,
    #[command(flatten)]
    pub budget: BudgetArgs,
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    #[command(flatten)]
    pub pres: PresArgs,
    #[arg(long)]
    pub h: String,
    /// Length thresholds L, comma-separated (W = root powers longer than L).
    #[arg(long = "L", value_delimiter = ',', default_value = "3")]
    pub l: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub eps: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    pub radius: usize,
    /// Check injectivity of the quotient by h^n on the kept set.
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TreeArgs {
    #[command(flatten)]
    pub pres: PresArgs,
    #[command(flatten)]
    pub rel: RelArgs,
    #[arg(long, default_value_t = 2)]
    pub r: usize,
    #[arg(long, default_value_t = 0)]
    pub delta: usize,
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    /// Children kept per vertex (0 keeps the whole annulus).
    #[arg(long, default_value_t = 3)]
    pub target: usize,
    /// Write the tree as JSON to this path.
    #[arg(long)]
    pub json: Option<PathBuf>,
}
