use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use tightdesign::search::DEFAULT_CHUNK;
use tightdesign::upper_bound::DEFAULT_PRECISION;

pub const DEFAULT_SIEVE_LIMIT: u64 = 1_300_000_000;

#[derive(Debug, Parser)]
#[command(
    name = "tightdesign",
    version,
    about = "Nonexistence certificates for tight 2s-designs with s >= 10"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify every identity family for all s up to --s-max.
    Identities(IdentitiesArgs),
    /// Regression report for the two Witt 4-designs.
    Witt,
    /// Upper bounds on v from psi and kappa.
    BoundsUpper(BoundsUpperArgs),
    /// Lower bounds on v from first prime gaps.
    BoundsLower(GapArgs),
    /// First occurrences of prime gaps.
    Rho(GapArgs),
    /// Search for (s, x, y) with alpha_1..alpha_6 integral.
    Search(SearchArgs),
    /// Run the three-case argument and emit one certificate per s.
    Pipeline(PipelineArgs),
}

#[derive(Debug, Args)]
pub struct IdentitiesArgs {
    #[arg(long, default_value_t = 12)]
    pub s_max: u32,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Perturb each right-hand side; every check must then fail.
    #[arg(long, hide = true)]
    pub inject_mutation: bool,
}

#[derive(Debug, Args)]
pub struct BoundsUpperArgs {
    #[arg(long, value_parser = parse_range)]
    pub s_range: RangeInclusive<u32>,
    /// Even r in [6, s]; defaults to 2 floor(s/2).
    #[arg(long)]
    pub r: Option<u64>,
    /// Cutoff b as an integer or a fraction `n/d`; defaults to the best integer b.
    #[arg(long)]
    pub b: Option<String>,
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    pub precision_bits: u32,
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GapArgs {
    #[arg(long, value_parser = parse_range)]
    pub s_range: RangeInclusive<u32>,
    #[arg(long, default_value_t = DEFAULT_SIEVE_LIMIT)]
    pub sieve_limit: u64,
    /// Read first-occurrence gaps from a file written by `rho --save-gap-table`.
    #[arg(long)]
    pub gap_table: Option<PathBuf>,
    #[arg(long)]
    pub save_gap_table: Option<PathBuf>,
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long, value_parser = parse_range, default_value = "10..287")]
    pub s_range: RangeInclusive<u32>,
    #[arg(long)]
    pub x_max: u64,
    #[arg(long, default_value_t = DEFAULT_CHUNK)]
    pub chunk_size: u64,
    #[arg(long, default_value_t = 6)]
    pub i_max: u32,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    #[arg(long, requires = "checkpoint")]
    pub resume: bool,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    #[arg(long, value_parser = parse_range)]
    pub s_range: RangeInclusive<u32>,
    /// Search checkpoint attesting hit-free coverage for s <= 287.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SIEVE_LIMIT)]
    pub sieve_limit: u64,
    #[arg(long)]
    pub gap_table: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    pub precision_bits: u32,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Write certificates here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Accepts `a..b`, `a..=b`, `a-b` or a single `a`.
pub fn parse_range(text: &str) -> Result<RangeInclusive<u32>, String> {
    let num = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("{t:?}: {e}"));
    let (lo, hi) = if let Some((a, b)) = text.split_once("..=") {
        (num(a)?, num(b)?)
    } else if let Some((a, b)) = text.split_once("..") {
        (num(a)?, num(b)?)
    } else if let Some((a, b)) = text.split_once('-') {
        (num(a)?, num(b)?)
    } else {
        let a = num(text)?;
        (a, a)
    };
    if lo > hi {
        return Err(format!("empty range {text:?}"));
    }
    Ok(lo..=hi)
}
