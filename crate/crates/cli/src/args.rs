use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "avset",
    version,
    about = "Exact average value sets of polynomial families over finite fields",
    args_conflicts_with_subcommands = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,

    /// Exact run when no subcommand is given.
    #[command(flatten)]
    pub family: Option<FamilyArgs>,

    #[arg(long, value_enum, default_value_t = MethodArg::Both)]
    pub method: MethodArg,

    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Args, Clone)]
pub struct GlobalArgs {
    /// Worker threads; 0 means available parallelism.
    #[arg(long, global = true, env = "AVSET_WORKERS", default_value_t = 0)]
    pub workers: usize,

    /// Work budget in operations; each command has its own default.
    #[arg(long, global = true)]
    pub budget: Option<f64>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Average value set by exhaustive enumeration, by the chi formula, or both.
    Avset(ExactArgs),
    /// Interpolating-set counts chi_r.
    Chi(ChiArgs),
    /// Exhaustive scan of V_r over F_q^r.
    Scan(ScanArgs),
    /// Explicit error bounds.
    #[command(subcommand)]
    Bounds(BoundsCommand),
    /// Property suite over the built-in grid.
    Verify(VerifyArgs),
    /// Symbolic remainder tables.
    Htable(HtableArgs),
}

#[derive(Debug, Args, Clone)]
pub struct FamilyArgs {
    /// "q" for prime q, or "p^k" with an optional ":c0,...,ck" modulus.
    #[arg(long)]
    pub field: String,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub s: usize,
    /// Fixed coefficients a_{d-1},...,a_{d-s}, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with = "seed")]
    pub a: Option<Vec<u32>>,
    /// Draw `a` from the seeded generator instead.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args, Clone)]
pub struct ExactArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, value_enum, default_value_t = MethodArg::Both)]
    pub method: MethodArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Brute,
    Formula,
    Both,
}

#[derive(Debug, Args)]
pub struct ChiArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// `r` or `lo..hi` (inclusive); defaults to d-s+1..d.
    #[arg(long, value_parser = parse_range)]
    pub r: Option<RangeInclusive<usize>>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// `r` or `lo..hi` (inclusive); defaults to d-s+1..d.
    #[arg(long, value_parser = parse_range)]
    pub r: Option<RangeInclusive<usize>>,
    #[arg(long, value_enum, default_value_t = ModeArg::Odometer)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value_t = EvaluatorArg::Symbolic)]
    pub evaluator: EvaluatorArg,
    /// Also list the rank-deficient orbit representatives.
    #[arg(long)]
    pub singular: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Odometer,
    Orbit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvaluatorArg {
    Symbolic,
    Remainder,
}

#[derive(Debug, Subcommand)]
pub enum BoundsCommand {
    /// Bounds at one (q, d, s), optionally checked against the exact average.
    Point(BoundsPointArgs),
    /// Profiles f, g, H, C for 4 <= d <= d_max.
    Sweep(BoundsSweepArgs),
    /// Bound checks for every main-regime (q, d, s, a) of a grid.
    Grid(BoundsGridArgs),
}

#[derive(Debug, Args)]
pub struct BoundsGridArgs {
    #[arg(long, value_delimiter = ',', default_value = "5,7,8,9,11,13,16,25,27")]
    pub fields: Vec<String>,
    /// Seeds of the random `a` vectors; `a = 0` is always included.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
    pub seeds: Vec<u64>,
    /// Largest degree considered.
    #[arg(long)]
    pub d_max: Option<usize>,
}

#[derive(Debug, Args)]
pub struct BoundsPointArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Compute the exact average via the chi formula and compare.
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Args)]
pub struct BoundsSweepArgs {
    #[arg(long, default_value_t = 40)]
    pub d_max: u64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Criteria to run (1-10); all by default.
    #[arg(long, value_delimiter = ',')]
    pub criteria: Option<Vec<u8>>,
    /// Field specs of the grid.
    #[arg(long, value_delimiter = ',')]
    pub fields: Option<Vec<String>>,
    /// Seeds of the random `a` vectors per cell.
    #[arg(long, value_delimiter = ',')]
    pub seeds: Option<Vec<u64>>,
    /// Points per case for the symbolic and determinant checks.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Scans run when q^r is at most this.
    #[arg(long)]
    pub scan_limit: Option<f64>,
}

#[derive(Debug, Args)]
pub struct HtableArgs {
    #[arg(long)]
    pub r: usize,
    /// Table degree bound; required unless --system is given.
    #[arg(long)]
    pub d: Option<usize>,
    /// Reduce into this field; integer coefficients otherwise.
    #[arg(long)]
    pub field: Option<String>,
    /// Dump the system R_j for a family instead.
    #[arg(long, requires_all = ["field", "d", "s"])]
    pub system: bool,
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long, value_delimiter = ',', conflicts_with = "seed")]
    pub a: Option<Vec<u32>>,
    #[arg(long)]
    pub seed: Option<u64>,
}

pub fn parse_range(text: &str) -> Result<RangeInclusive<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    let (lo, hi) = match text.split_once("..") {
        Some((lo, hi)) => (num(lo)?, num(hi.trim_start_matches('='))?),
        None => {
            let v = num(text)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range {text:?}"));
    }
    Ok(lo..=hi)
}
