use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "gft",
    version,
    about = "Sharp beta, hypothesis checks and membership verification for V_lambda^delta"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format; defaults to json for single runs and csv for tables.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the sharp beta for a weight.
    Beta(BetaArgs),
    /// Run the region, decreasing-ratio and M-integral checks.
    Check(CheckArgs),
    /// Build the transformed extremal function and test convexity-class membership.
    Verify(VerifyArgs),
    /// Evaluate a parameter lattice (or a seeded random sample of it) into one row per point.
    Sweep(SweepArgs),
    /// Tabulate q(t) by all three methods.
    Qtable(QtableArgs),
}

/// A scalar `x` or an inclusive range `lo:hi:n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Axis {
    Value(f64),
    Range { lo: f64, hi: f64, n: usize },
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            Axis::Value(x) => vec![x],
            Axis::Range { lo, n: 1, .. } => vec![lo],
            Axis::Range { lo, hi, n } => (0..n)
                .map(|i| {
                    if i + 1 == n {
                        hi
                    } else {
                        lo + (hi - lo) * i as f64 / (n - 1) as f64
                    }
                })
                .collect(),
        }
    }

    pub fn scalar(&self) -> Option<f64> {
        match *self {
            Axis::Value(x) => Some(x),
            _ => None,
        }
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |x: &str| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad number '{x}'"))
        };
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [x] => Ok(Axis::Value(num(x)?)),
            [lo, hi, n] => {
                let n: usize = n.trim().parse().map_err(|_| format!("bad count '{n}'"))?;
                if n == 0 {
                    return Err("range count must be >= 1".into());
                }
                Ok(Axis::Range {
                    lo: num(lo)?,
                    hi: num(hi)?,
                    n,
                })
            }
            _ => Err(format!("expected a number or lo:hi:n, got '{s}'")),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::Value(x) => write!(f, "{x}"),
            Axis::Range { lo, hi, n } => write!(f, "{lo}:{hi}:{n}"),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<Axis>,
    /// Defaults to 0.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["mu", "nu"])]
    pub gamma: Option<Axis>,
    /// Defaults to 1.
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<Axis>,
    /// Defaults to 0.
    #[arg(long, allow_hyphen_values = true)]
    pub zeta: Option<Axis>,
    /// Smaller root; give with --nu instead of --alpha/--gamma.
    #[arg(
        long,
        allow_hyphen_values = true,
        requires = "nu",
        conflicts_with = "alpha"
    )]
    pub mu: Option<Axis>,
    #[arg(long, allow_hyphen_values = true, requires = "mu")]
    pub nu: Option<Axis>,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Comma-separated radii of the boundary grid.
    #[arg(long, value_delimiter = ',', default_value = "0.5,0.9,0.99")]
    pub grid_r: Vec<f64>,
    /// Angular samples per circle.
    #[arg(long, default_value_t = 720)]
    pub grid_n: usize,
    /// Series truncation order; defaults to the order exact at the outer radius.
    #[arg(long)]
    pub series_order: Option<usize>,
    /// Slack on the membership minimum.
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct BetaOptions {
    /// Use the closed form (Carlson-Shaffer, Hohlov with a = 1) and compare with quadrature.
    #[arg(long)]
    pub closed_form: bool,
    /// Report beta under the normalization beta/(1 - beta) = -I.
    #[arg(long)]
    pub printed_normalization: bool,
}

#[derive(Debug, Args)]
pub struct BetaArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// hohlov:a,b,c | cs:b,c | komatu:k,p | genbeta:A,B,C[,x1,...]
    #[arg(long)]
    pub weight: String,
    #[command(flatten)]
    pub beta: BetaOptions,
    /// Terms of the moment series used as a cross-check.
    #[arg(long, default_value_t = 500)]
    pub series_terms: usize,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long)]
    pub weight: String,
    /// Log-spaced points for the decreasing-ratio test.
    #[arg(long, default_value_t = 200)]
    pub t_points: usize,
    /// Points on the unit circle for the M integral (the pole z = 1 is skipped).
    #[arg(long, default_value_t = 72)]
    pub z_points: usize,
    /// Unimodular eps samples for the M integral.
    #[arg(long, default_value_t = 16)]
    pub eps_points: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long)]
    pub weight: String,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub beta: BetaOptions,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Weight template; any argument may be a range, e.g. genbeta:1,0.1:1:10,4.
    #[arg(long)]
    pub weight: String,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Draw this many points uniformly from the ranges instead of walking the lattice.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Points for the decreasing-ratio test.
    #[arg(long, default_value_t = 200)]
    pub t_points: usize,
}

#[derive(Debug, Args)]
pub struct QtableArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Comma-separated t values; defaults to 0, 0.1, ..., 0.9.
    #[arg(long, value_delimiter = ',')]
    pub t: Vec<f64>,
    /// Terms of the power series.
    #[arg(long, default_value_t = gft_core::q_functions::DEFAULT_N_MAX)]
    pub n_terms: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_parsing() {
        assert_eq!("0.5".parse::<Axis>().unwrap(), Axis::Value(0.5));
        assert_eq!(
            "0:1:3".parse::<Axis>().unwrap().values(),
            vec![0.0, 0.5, 1.0]
        );
        assert_eq!("2:9:1".parse::<Axis>().unwrap().values(), vec![2.0]);
        assert!("1:2".parse::<Axis>().is_err());
        assert!("0:1:0".parse::<Axis>().is_err());
        assert!("x".parse::<Axis>().is_err());
    }

    #[test]
    fn range_hits_endpoint_exactly() {
        let v = "0.1:1.0:10".parse::<Axis>().unwrap().values();
        assert_eq!(v.len(), 10);
        assert_eq!(v[9], 1.0);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
