//! CLI argument parsing and run configuration.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use regpart_core::numerics::{Precision, DEFAULT_PRECISION_BITS};

/// Environment variable overriding the default working precision.
pub const PRECISION_ENV_VAR: &str = "REGPART_PRECISION_BITS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Jsonl,
}

/// Inclusive integer range, written `a..b` or as a single value `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InclusiveRange {
    pub start: u64,
    pub end: u64,
}

impl InclusiveRange {
    pub fn iter(self) -> impl Iterator<Item = u64> {
        self.start..=self.end
    }
}

impl FromStr for InclusiveRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (start, end) = match s.split_once("..") {
            Some((a, b)) => {
                let start = a
                    .trim()
                    .parse::<u64>()
                    .map_err(|e| format!("bad range start: {e}"))?;
                let end = b
                    .trim()
                    .parse::<u64>()
                    .map_err(|e| format!("bad range end: {e}"))?;
                (start, end)
            }
            None => {
                let v = s
                    .trim()
                    .parse::<u64>()
                    .map_err(|e| format!("bad value: {e}"))?;
                (v, v)
            }
        };
        if start > end {
            return Err(format!("empty range {start}..{end}"));
        }
        Ok(InclusiveRange { start, end })
    }
}

impl fmt::Display for InclusiveRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

/// Options common to every subcommand.
#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Working precision in bits (>= 64); REGPART_PRECISION_BITS overrides
    /// the built-in default when the flag is absent.
    #[arg(long = "precision-bits")]
    pub precision_bits: Option<u32>,

    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,

    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl CommonArgs {
    /// Resolves flag > environment > default.
    pub fn precision(&self) -> Result<Precision, String> {
        let bits = match self.precision_bits {
            Some(b) => b,
            None => match std::env::var(PRECISION_ENV_VAR) {
                Ok(v) => v
                    .trim()
                    .parse::<u32>()
                    .map_err(|e| format!("{PRECISION_ENV_VAR}: {e}"))?,
                Err(_) => DEFAULT_PRECISION_BITS,
            },
        };
        Precision::new(bits).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "regpart",
    version,
    about = "Exact regular-partition counts, saddle-point asymptotics, and certification suites"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit exact p(N, t) rows.
    Exact {
        #[arg(long = "N")]
        n: InclusiveRange,
        #[arg(long = "t")]
        t: InclusiveRange,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Emit per-cell regime estimates, with exact containment when N is
    /// within the exact-count budget.
    Estimate {
        #[arg(long = "N")]
        n: InclusiveRange,
        #[arg(long = "t")]
        t: InclusiveRange,
        /// Regime-I boundary parameter.
        #[arg(long, default_value = "0.01")]
        epsilon: String,
        /// Largest N for which exact counts are computed.
        #[arg(long = "exact-budget", default_value_t = 3000)]
        exact_budget: u64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Solve the saddle-point equation per cell and emit the enveloped
    /// estimate.
    Saddle {
        #[arg(long = "N")]
        n: InclusiveRange,
        #[arg(long = "t")]
        t: InclusiveRange,
        /// Residual tolerance relative to L (decimal).
        #[arg(long)]
        tol: Option<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Classify cells into estimator regimes.
    Regime {
        #[arg(long = "N")]
        n: InclusiveRange,
        #[arg(long = "t")]
        t: InclusiveRange,
        #[arg(long, default_value = "0.01")]
        epsilon: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run certification suites; exit 0 iff every record passes.
    Validate {
        /// Restrict to one suite (eta-bracket, mu-lemmas, prop21, glaisher,
        /// containment).
        #[arg(long)]
        suite: Option<String>,
        /// 1/y values for the off-center quadrature suite.
        #[arg(long = "inv-y")]
        inv_y: Vec<u64>,
        /// Restrict the quadrature suite's t values.
        #[arg(long = "t")]
        t: Option<InclusiveRange>,
        #[arg(long, default_value = "0.01")]
        epsilon: String,
        /// Largest N for exact-count containment checks.
        #[arg(long = "exact-budget", default_value_t = 3000)]
        exact_budget: u64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Emit character-table zero-count lower bounds.
    Zeros {
        #[arg(long = "N")]
        n: InclusiveRange,
        #[arg(long = "t")]
        t: InclusiveRange,
        #[arg(long, default_value = "0.01")]
        epsilon: String,
        /// Replaces the branch crossover f(N) (decimal value).
        #[arg(long = "f-override")]
        f_override: Option<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
}
