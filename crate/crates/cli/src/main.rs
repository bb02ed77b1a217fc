mod commands;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use output::Format;

#[derive(Parser, Debug)]
#[command(name = "potts", version, about = "Exact Potts partition functions, bound verifiers, zero scans and coloring counts")]
struct Cli {
    /// Worker threads for family runs (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Partition polynomial of one graph and its values on a w-grid.
    Exact(ExactArgs),
    /// Check bounds and identities over an enumerated family.
    Verify(VerifyArgs),
    /// Complex zeros of Z_G(q; w) and their distance to [0, 1].
    Scan(ScanArgs),
    /// Approximate Z_G(q; w) (by default the proper coloring count) by Taylor stepping.
    Interpolate(InterpolateArgs),
    /// Write named graphs or a whole enumerated family as edge lists.
    Gen(GenArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    /// Output file; stdout when omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug, Serialize)]
pub struct ExactArgs {
    #[arg(long, short)]
    input: PathBuf,
    /// Override the number of colors in the file header.
    #[arg(long)]
    q: Option<usize>,
    /// Evaluation points such as `0`, `1/3` or `0.25`; repeatable.
    #[arg(long = "w", value_parser = parse_weight)]
    #[serde(serialize_with = "ser_rationals")]
    ws: Vec<BigRational>,
    /// Evenly spaced grid on [0, 1], used when no `--w` is given.
    #[arg(long, default_value_t = 11)]
    grid: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Pins {
    None,
    Single,
    All,
}

impl From<Pins> for potts_core::graph::PinPolicy {
    fn from(p: Pins) -> Self {
        match p {
            Pins::None => Self::None,
            Pins::Single => Self::SinglePin,
            Pins::All => Self::AllPatterns,
        }
    }
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    /// Bound or identity id; repeatable.
    #[arg(long = "bound", required_unless_present = "all")]
    bounds: Vec<String>,
    /// Run every registered check.
    #[arg(long, conflicts_with = "bounds")]
    all: bool,
    #[arg(long, default_value_t = 6)]
    nmax: usize,
    #[arg(long, default_value_t = 3)]
    delta: usize,
    #[arg(long, default_value_t = 6)]
    q: usize,
    #[arg(long, value_enum, default_value_t = Pins::All)]
    pins: Pins,
    #[arg(long, default_value_t = 11)]
    grid: usize,
    /// Explicit weights in [0, 1]; override `--grid`.
    #[arg(long = "w", value_parser = parse_weight)]
    #[serde(serialize_with = "ser_rationals")]
    ws: Vec<BigRational>,
    /// Exit with status 4 when a check is out of its regime.
    #[arg(long)]
    strict: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct ScanArgs {
    /// `all` for every connected graph up to `--nmax` vertices.
    #[arg(long, required_unless_present = "input", conflicts_with = "input")]
    family: Option<String>,
    #[arg(long, short)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 8)]
    nmax: usize,
    /// Maximum degree; for `--input` defaults to the graph's own.
    #[arg(long)]
    delta: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long, value_enum, default_value_t = Pins::None)]
    pins: Pins,
    /// Also tabulate the margins of K_{Δ+1} at q = 2Δ for these Δ.
    #[arg(long, num_args = 1..)]
    cliques: Vec<usize>,
    #[arg(long)]
    strict: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct InterpolateArgs {
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long, default_value_t = 0.01)]
    eps: f64,
    /// Target weight in [0, 1].
    #[arg(long, value_parser = parse_weight, default_value = "0")]
    #[serde(serialize_with = "ser_rational")]
    target: BigRational,
    /// Compare against the exact value and fail if it lies outside the bound.
    #[arg(long)]
    check: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Cycle,
    Clique,
    Path,
    Star,
    RandomRegular,
    CompleteBipartite,
    Petersen,
    /// Every connected graph up to `--n` vertices with degree at most `--d`;
    /// `--output` names a directory.
    All,
}

#[derive(Args, Debug, Serialize)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    /// Vertex count (leaf count for `star`, size bound for `all`).
    #[arg(long)]
    n: Option<usize>,
    /// Degree for `random-regular`, maximum degree for `all`.
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    a: Option<usize>,
    #[arg(long)]
    b: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    q: usize,
    #[arg(long, value_enum, default_value_t = Pins::None)]
    pins: Pins,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

/// Parses `k`, `k/m` or a finite decimal as an exact rational.
pub fn parse_weight(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let bad = || format!("`{s}` is not a rational number");
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den == BigInt::from(0) {
            return Err(format!("`{s}` has a zero denominator"));
        }
        return Ok(BigRational::new(num, den));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if frac.chars().any(|c| !c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let num: BigInt = digits.parse().map_err(|_| bad())?;
    Ok(BigRational::new(num, num_traits::pow(BigInt::from(10), frac.len())))
}

fn ser_rational<S: serde::Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn ser_rationals<S: serde::Serializer>(rs: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(rs.iter().map(|r| r.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(error::USAGE);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(error::RESOURCE);
        }
    }
    let result = match &cli.command {
        Command::Exact(a) => commands::exact(a),
        Command::Verify(a) => commands::verify(a),
        Command::Scan(a) => commands::scan(a),
        Command::Interpolate(a) => commands::interpolate(a),
        Command::Gen(a) => commands::gen(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(parse_weight("1/3").unwrap(), r(1, 3));
        assert_eq!(parse_weight("0.25").unwrap(), r(1, 4));
        assert_eq!(parse_weight("1").unwrap(), r(1, 1));
        assert_eq!(parse_weight(".5").unwrap(), r(1, 2));
        assert!(parse_weight("1/0").is_err());
        assert!(parse_weight("x").is_err());
        assert!(parse_weight("0.5e3").is_err());
    }
}
