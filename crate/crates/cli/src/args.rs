use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "tra-spectrum",
    version,
    about = "Bound states of V(r) = A[coth λr − 1] − B/sinh² λr + C cosh λr/sinh³ λr",
    after_help = "Options may also come from a flat `key = value` file given with --config; \
                  keys are the flag names without dashes and flags on the command line win."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bound-state energies −ε_k = −2E_k/λ².
    #[command(args_override_self = true)]
    Spectrum {
        #[command(flatten)]
        potential: PotentialArgs,
        #[command(flatten)]
        basis: BasisArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Potential curve in units of λ²C/2 and its shape report.
    #[command(args_override_self = true)]
    Potential {
        #[command(flatten)]
        potential: PotentialArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Write the shape report here instead of standard error (CSV mode).
        #[arg(long)]
        shape_out: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Un-normalized wavefunction of one bound state.
    #[command(args_override_self = true)]
    Wavefunction {
        #[command(flatten)]
        potential: PotentialArgs,
        #[command(flatten)]
        basis: BasisArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Bound-state index k (0 is the ground state).
        #[arg(long, default_value_t = 0)]
        state: usize,
        /// Series length override; the default is k + 1 terms.
        #[arg(long)]
        terms: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Spectrum over a μ grid and the stable window of each state.
    #[command(args_override_self = true)]
    Plateau {
        #[command(flatten)]
        potential: PotentialArgs,
        #[command(flatten)]
        basis: BasisArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        mu_min: f64,
        #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
        mu_max: f64,
        /// Number of grid points, end points included.
        #[arg(long, default_value_t = 26)]
        mu_steps: usize,
        /// How ν follows μ: table, eliminate, or fixed (uses --nu).
        #[arg(long, default_value = "table")]
        nu_rule: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Gauss-rule matrices against direct integration for small bases.
    #[command(args_override_self = true)]
    CheckQuadrature {
        /// μ of the Jacobi basis.
        #[arg(long, default_value_t = 1.5, allow_negative_numbers = true)]
        mu: f64,
        /// ν of the Jacobi basis; `auto` follows each degree as −2(d+1) − μ − 2.
        #[arg(long, default_value = "auto", allow_negative_numbers = true)]
        nu: NuSetting,
        #[arg(long, default_value_t = 0)]
        min_degree: usize,
        /// Highest polynomial degree checked (at most 8).
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        /// Absolute tolerance of the adaptive integrals.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Args)]
pub struct PotentialArgs {
    #[arg(long = "A", allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long = "B", allow_negative_numbers = true)]
    pub b: f64,
    #[arg(long = "C", allow_negative_numbers = true)]
    pub c: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
}

#[derive(Debug, Args)]
pub struct BasisArgs {
    /// Basis size N (degrees 0..N−1).
    #[arg(long, default_value_t = 100)]
    pub basis_degree: usize,
    #[arg(long, default_value_t = 1.5, allow_negative_numbers = true)]
    pub mu: f64,
    /// A number, or `auto` for −2N − μ − 2.
    #[arg(long, default_value = "auto", allow_negative_numbers = true)]
    pub nu: NuSetting,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// cholesky, cholesky-f64, nodal or nodal-f64.
    #[arg(long, default_value = "cholesky")]
    pub solver: String,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long)]
    pub r_min: Option<f64>,
    #[arg(long)]
    pub r_max: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NuSetting {
    Auto,
    Value(f64),
}

impl FromStr for NuSetting {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(NuSetting::Auto);
        }
        s.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(NuSetting::Value)
            .ok_or_else(|| format!("expected a number or `auto`, got `{s}`"))
    }
}
