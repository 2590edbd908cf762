//! `melnikov` command-line front end.
//!
//! Exit codes: 0 success, 1 schema or usage error, 2 domain error,
//! 3 a verification or bound check failed. JSON goes to stdout, a short
//! human summary to stderr.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "melnikov", version, about = "Elliptic integrals, Picard-Fuchs reductions, zero counts and Melnikov decompositions")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    out: Output,

    /// Tolerance override, within [1e-15, 1e-3].
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Initial scan grid (intervals) for zero counting.
    #[arg(long, global = true, default_value_t = 64)]
    grid: usize,

    /// Seed for `--random` inputs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    #[value(name = "K")]
    K,
    #[value(name = "E")]
    E,
    #[value(name = "Pi")]
    Pi,
    #[value(name = "RF")]
    Rf,
    #[value(name = "RD")]
    Rd,
    #[value(name = "RJ")]
    Rj,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    PolySGe2,
    PolySEq1,
    ConstantMu,
    RationalSpecial,
}

/// Where a perturbation spec comes from.
#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct SpecSource {
    /// Perturbation spec JSON file.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// The packaged degree-3 sample spec.
    #[arg(long)]
    sample: bool,
    /// A random spec of this degree (uses --seed).
    #[arg(long, value_name = "N")]
    random: Option<u32>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a complete elliptic integral or a Carlson form.
    EllipticEval {
        #[arg(long, allow_hyphen_values = true)]
        k: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<f64>,
        #[arg(long, value_enum)]
        kind: Kind,
        /// Explicit Carlson arguments x,y,z[,p]; otherwise the Legendre ones for k and mu.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        args: Option<Vec<f64>>,
    },
    /// Check both Picard-Fuchs systems and the Wronskian on a k grid.
    PfVerify {
        /// "special" for 2k^2/(1+k^2), or polynomial coefficients lowest first, e.g. "1/4,1/4".
        #[arg(long, default_value = "special")]
        mu: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        k: Option<Vec<f64>>,
    },
    /// Evaluate a zero-count bound.
    Bound {
        #[arg(long, num_args = 4, value_names = ["M", "N", "L", "S"])]
        psi: Option<Vec<u64>>,
        #[arg(long, num_args = 3, value_names = ["M", "N", "L"])]
        rational: Option<Vec<u64>>,
        #[arg(long, num_args = 2, value_names = ["M", "N"])]
        two_kind: Option<Vec<u64>>,
        #[arg(long, value_name = "N")]
        melnikov: Option<u64>,
    },
    /// Eliminate the third-kind integral from pK + qE + rPi.
    Reduce {
        /// Reduction input JSON: {"p": [...], "q": [...], "r": [...], "mu": "special" | {"poly": [...]}}.
        #[arg(long, conflicts_with = "random")]
        spec: Option<PathBuf>,
        /// Random input of this case (uses --seed).
        #[arg(long, value_enum)]
        random: Option<CaseArg>,
    },
    /// Count zeros of pK + qE + rPi on an interval.
    Zeros {
        #[arg(long, conflicts_with = "random")]
        spec: Option<PathBuf>,
        /// Random degree <= 3 input with mu = 2k^2/(1+k^2) (uses --seed).
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
        lo: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        hi: f64,
    },
    /// Decompose the Melnikov function into the six generators.
    MelnikovDecompose {
        #[command(flatten)]
        source: SpecSource,
    },
    /// Evaluate the Melnikov function at given energies or on a sweep.
    MelnikovEval {
        #[command(flatten)]
        source: SpecSource,
        /// Energies in (0, 1/64); a uniform sweep in u when absent.
        #[arg(long, value_delimiter = ',')]
        h: Option<Vec<f64>>,
        #[arg(long, default_value_t = 200)]
        points: usize,
        /// Also integrate directly and fail if the relative gap exceeds --tol (default 1e-6).
        #[arg(long)]
        check: bool,
    },
    /// Count zeros of the Melnikov function against the degree-n bound.
    MelnikovZeros {
        #[command(flatten)]
        source: SpecSource,
    },
}

pub enum CliError {
    Schema(String),
    Domain(String),
    /// The command produced output but a check failed.
    Verification(String),
}

impl From<melnikov_core::Error> for CliError {
    fn from(e: melnikov_core::Error) -> Self {
        match e {
            melnikov_core::Error::Parse(m) => CliError::Schema(m),
            other => CliError::Domain(other.to_string()),
        }
    }
}

pub struct Ctx {
    pub out: Output,
    pub tol: Option<f64>,
    pub grid: usize,
    pub seed: u64,
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(t) = cli.tol {
        if !(1e-15..=1e-3).contains(&t) {
            return Err(CliError::Schema(format!("--tol {t} outside [1e-15, 1e-3]")));
        }
    }
    let ctx = Ctx {
        out: cli.out,
        tol: cli.tol,
        grid: cli.grid,
        seed: cli.seed,
    };
    match cli.command {
        Command::EllipticEval { k, mu, kind, args } => commands::elliptic_eval(&ctx, k, mu, kind, args),
        Command::PfVerify { mu, k } => commands::pf_verify(&ctx, &mu, k),
        Command::Bound {
            psi,
            rational,
            two_kind,
            melnikov,
        } => commands::bound(&ctx, psi, rational, two_kind, melnikov),
        Command::Reduce { spec, random } => commands::reduce(&ctx, spec, random),
        Command::Zeros { spec, random, lo, hi } => commands::zeros(&ctx, spec, random, lo, hi),
        Command::MelnikovDecompose { source } => commands::melnikov_decompose(&ctx, &source),
        Command::MelnikovEval {
            source,
            h,
            points,
            check,
        } => commands::melnikov_eval(&ctx, &source, h, points, check),
        Command::MelnikovZeros { source } => commands::melnikov_zeros(&ctx, &source),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Schema(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(CliError::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Verification(m)) => {
            eprintln!("check failed: {m}");
            ExitCode::from(3)
        }
    }
}
