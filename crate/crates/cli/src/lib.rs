//! `fracnoether` command-line front end.
//!
//! Every command validates its flags into a [`RunConfig`], runs against the
//! core library and writes plot-ready artifacts (`extremal.csv`,
//! `report.json`, `table.csv`) into the output directory. Exit codes:
//! 0 ok, 2 configuration error, 3 numeric failure, 4 not found.

use std::fmt;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use fracnoether_core::problems::parse_override;
use fracnoether_core::{Error as CoreError, FracOrder, Grid};

pub mod commands;
pub mod output;

pub use commands::{
    cmd_check_conservation, cmd_convergence, cmd_frac_deriv, cmd_list, cmd_solve, cmd_sweep_alpha,
};

#[derive(Parser, Debug, Clone)]
#[command(name = "fracnoether", version, about = "Fractional Noether conservation laws: solve, check, tabulate")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: CommonArgs,
}

/// Flags shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Problem name from the registry (see `list`)
    #[arg(long, global = true)]
    pub problem: Option<String>,

    /// Fractional order in (0, 1]
    #[arg(long, global = true, default_value_t = 0.5, allow_negative_numbers = true)]
    pub alpha: f64,

    /// Number of grid intervals (initial level for `convergence`)
    #[arg(long = "N", global = true, default_value_t = 256)]
    pub n: usize,

    #[arg(long, global = true, default_value_t = 0.0, allow_negative_numbers = true)]
    pub a: f64,

    #[arg(long, global = true, default_value_t = 1.0, allow_negative_numbers = true)]
    pub b: f64,

    /// Conservation tolerance on the charge residual
    #[arg(long, global = true, default_value_t = 1e-2, allow_negative_numbers = true)]
    pub tol: f64,

    /// Output directory
    #[arg(long, global = true, env = "FRACNOETHER_OUT")]
    pub out: Option<PathBuf>,

    /// Parameter override, repeatable
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,

    /// Seed for randomized validation points
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Solve the Pontryagin system; writes extremal.csv and report.json
    Solve,
    /// Solve and check the charge of every declared symmetry; writes report.json
    CheckConservation,
    /// Tabulate a discrete fractional derivative against its analytic value
    FracDeriv(FracDerivArgs),
    /// Error or residual across a doubling sequence of grids, with fitted order
    Convergence(ConvergenceArgs),
    /// Charge residual and plain Hamiltonian spread across several orders
    SweepAlpha(SweepArgs),
    /// Print the problem registry with validation results
    List,
}

#[derive(Args, Debug, Clone)]
pub struct FracDerivArgs {
    /// Test function: power, const or sin
    #[arg(long, default_value = "power")]
    pub function: String,

    /// Exponent of the power function
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub upsilon: f64,

    #[arg(long, value_enum, default_value_t = Side::Left)]
    pub side: Side,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvergenceCheck {
    FracDeriv,
    Conservation,
}

#[derive(Args, Debug, Clone)]
pub struct ConvergenceArgs {
    #[arg(long, value_enum, default_value_t = ConvergenceCheck::FracDeriv)]
    pub check: ConvergenceCheck,

    /// Number of grids N0, 2 N0, 4 N0, ...; at least 3
    #[arg(long, default_value_t = 4)]
    pub levels: usize,

    #[command(flatten)]
    pub deriv: FracDerivArgs,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    /// Comma-separated orders in (0, 1]
    #[arg(long, default_value = "0.25,0.5,0.75,1")]
    pub alphas: String,
}

/// Validated flags.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub problem: Option<String>,
    pub alpha: FracOrder,
    pub grid: Grid,
    pub tol: f64,
    pub out: PathBuf,
    pub overrides: Vec<(String, f64)>,
    pub seed: u64,
}

impl RunConfig {
    pub fn from_args(args: &CommonArgs) -> Result<Self, CliError> {
        if !(args.alpha > 0.0 && args.alpha <= 1.0) {
            return Err(CliError::config(format!("--alpha must lie in (0, 1], got {}", args.alpha)));
        }
        if args.n < 8 {
            return Err(CliError::config(format!("--N must be at least 8, got {}", args.n)));
        }
        if !(args.a.is_finite() && args.b.is_finite() && args.b > args.a) {
            return Err(CliError::config(format!("need b > a, got a={}, b={}", args.a, args.b)));
        }
        if !(args.tol > 0.0 && args.tol.is_finite()) {
            return Err(CliError::config(format!("--tol must be positive, got {}", args.tol)));
        }
        let overrides = args.set.iter().map(|s| parse_override(s)).collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            problem: args.problem.clone(),
            alpha: FracOrder::new(args.alpha)?,
            grid: Grid::new(args.a, args.b, args.n)?,
            tol: args.tol,
            out: args.out.clone().unwrap_or_else(|| PathBuf::from(".")),
            overrides,
            seed: args.seed,
        })
    }

    pub fn out_dir(&self) -> &Path {
        &self.out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitKind {
    Config,
    Numeric,
    NotFound,
}

impl ExitKind {
    pub fn code(self) -> i32 {
        match self {
            ExitKind::Config => 2,
            ExitKind::Numeric => 3,
            ExitKind::NotFound => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub kind: ExitKind,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self { kind: ExitKind::Config, message: message.into() }
    }

    pub fn numeric(message: impl Into<String>) -> Self {
        Self { kind: ExitKind::Numeric, message: message.into() }
    }

    pub fn not_found(message: impl Into<String>) -> Self {
        Self { kind: ExitKind::NotFound, message: message.into() }
    }

    pub fn code(&self) -> i32 {
        self.kind.code()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let kind = match &e {
            CoreError::UnknownProblem(_) => ExitKind::NotFound,
            CoreError::InvalidOrder(..)
            | CoreError::InvalidGrid(_)
            | CoreError::InvalidArgument(_)
            | CoreError::DimensionMismatch { .. }
            | CoreError::UnknownParameter { .. }
            | CoreError::UnsupportedTransformation(_) => ExitKind::Config,
            _ => ExitKind::Numeric,
        };
        Self { kind, message: e.to_string() }
    }
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    /// 0, or 3 when the command ran but a numeric requirement failed.
    pub code: i32,
    pub message: String,
    pub files: Vec<PathBuf>,
}

impl Outcome {
    pub fn ok(message: impl Into<String>, files: Vec<PathBuf>) -> Self {
        Self { code: 0, message: message.into(), files }
    }
}

/// Runs one parsed command line and returns the process exit code.
///
/// Write errors on stdout/stderr (a closed pipe, say) are ignored.
pub fn run(cli: Cli) -> i32 {
    let (mut out, mut err) = (io::stdout().lock(), io::stderr().lock());
    match execute(&cli) {
        Ok(outcome) => {
            if !outcome.message.is_empty() {
                let _ = if outcome.code == 0 {
                    writeln!(out, "{}", outcome.message)
                } else {
                    writeln!(err, "{}", outcome.message)
                };
            }
            for f in &outcome.files {
                let _ = writeln!(out, "wrote {}", f.display());
            }
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code()
        }
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let cfg = RunConfig::from_args(&cli.common)?;
    match &cli.command {
        Command::Solve => cmd_solve(&cfg),
        Command::CheckConservation => cmd_check_conservation(&cfg),
        Command::FracDeriv(args) => cmd_frac_deriv(&cfg, args),
        Command::Convergence(args) => cmd_convergence(&cfg, args),
        Command::SweepAlpha(args) => cmd_sweep_alpha(&cfg, args),
        Command::List => cmd_list(&cfg),
    }
}
