// `!(x >= 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gauss_epi::campaign::CheckKind;
use gauss_epi::inequalities::FisherMethod;
use gauss_epi::tolerances::{TOL_CI, TOL_MARGIN, TOL_VALID};

/// Numerical checks of conditional entropy-power and Stam inequalities on
/// bosonic Gaussian states.
#[derive(Debug, Parser)]
#[command(name = "gauss-epi", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a state file and report its spectrum, entropies and energies.
    Validate(ValidateArgs),
    /// Evaluate one inequality on a state file.
    Check(CheckArgs),
    /// Run a seeded campaign over random conditionally independent states.
    Campaign(CampaignArgs),
    /// Tabulate a quantity over a parameter grid.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckName {
    Epi,
    Stam,
    EpiLinear,
    StamLinear,
}

impl From<CheckName> for CheckKind {
    fn from(c: CheckName) -> Self {
        match c {
            CheckName::Epi => CheckKind::Epi,
            CheckName::Stam => CheckKind::Stam,
            CheckName::EpiLinear => CheckKind::EpiLinear,
            CheckName::StamLinear => CheckKind::StamLinear,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FisherName {
    Analytic,
    Richardson,
}

impl From<FisherName> for FisherMethod {
    fn from(f: FisherName) -> Self {
        match f {
            FisherName::Analytic => FisherMethod::AnalyticDerivative,
            FisherName::Richardson => FisherMethod::RichardsonFd,
        }
    }
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[arg(long)]
    input: PathBuf,
    /// Slack allowed below ½ for the smallest symplectic eigenvalue.
    #[arg(long, allow_negative_numbers = true, default_value_t = TOL_VALID)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct RoleArgs {
    #[arg(long, default_value = "A")]
    a_label: String,
    #[arg(long, default_value = "B")]
    b_label: String,
    /// Memory labels; defaults to `M` when the state has it.
    #[arg(long, value_delimiter = ',')]
    m_labels: Option<Vec<String>>,
}

#[derive(Debug, Args)]
struct ToleranceArgs {
    /// Margins below `-tol` count as violations.
    #[arg(long, allow_negative_numbers = true, default_value_t = TOL_MARGIN)]
    tol: f64,
    /// Largest I(A:B|M) accepted as conditional independence.
    #[arg(long, allow_negative_numbers = true, default_value_t = TOL_CI)]
    tol_ci: f64,
    #[arg(long, value_enum, default_value_t = FisherName::Analytic)]
    fisher: FisherName,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(value_enum)]
    check: CheckName,
    #[arg(long)]
    input: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    eta: f64,
    /// Weight for the linear forms; the optimal weight when omitted.
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    #[command(flatten)]
    roles: RoleArgs,
    #[command(flatten)]
    tol: ToleranceArgs,
    /// Slack allowed below ½ when loading the state.
    #[arg(long, allow_negative_numbers = true, default_value_t = TOL_VALID)]
    tol_valid: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct CampaignArgs {
    #[arg(value_enum)]
    check: CheckName,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Modes in each of A and B.
    #[arg(long, default_value_t = 1)]
    modes: usize,
    /// Memory modes attached to each of A and B.
    #[arg(long, default_value_t = 1)]
    memory: usize,
    /// Upper end of the thermal spectrum of the random factors.
    #[arg(long, allow_negative_numbers = true, default_value_t = 3.0)]
    nu_max: f64,
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    eta_grid: Option<Vec<f64>>,
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    #[command(flatten)]
    tol: ToleranceArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(subcommand)]
    kind: SweepKind,
}

#[derive(Debug, Subcommand)]
enum SweepKind {
    /// S(A|M) after heat for time t, minus n ln t + n.
    Scaling {
        /// State file; a one-mode vacuum labelled `A` when omitted.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value = "A")]
        a_label: String,
        #[arg(long, value_delimiter = ',')]
        m_labels: Option<Vec<String>>,
        #[arg(
            long,
            allow_hyphen_values = true,
            value_delimiter = ',',
            default_value = "100,1000,10000"
        )]
        t_grid: Vec<f64>,
        #[arg(long, allow_negative_numbers = true, default_value_t = TOL_VALID)]
        tol_valid: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Conditional entropies along the optimal sequence against their limits.
    Sharp {
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        #[arg(long, allow_negative_numbers = true)]
        eta: f64,
        #[arg(long, value_delimiter = ',', default_value = "10,100,1000")]
        k_grid: Vec<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// S(B|A') for a channel applied to purified thermal inputs.
    LowerBound {
        /// Channel as JSON, e.g. `{"kind":"beamsplitter","eta":0.5}`.
        #[arg(long, conflicts_with = "t")]
        channel: Option<String>,
        /// Heat channel time, used when `--channel` is absent.
        #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 1)]
        modes: usize,
        #[arg(
            long,
            allow_hyphen_values = true,
            value_delimiter = ',',
            default_value = "0.5,1,10,100,1000"
        )]
        nu_grid: Vec<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Entanglement-assisted capacity bound over η and input energy.
    Capacity {
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        eta: Vec<f64>,
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        energy: Vec<f64>,
        /// Thermal environment; ignored when both `--e0` and `--s0` are given.
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.5)]
        env_nu: f64,
        #[arg(long, allow_negative_numbers = true, requires = "s0")]
        e0: Option<f64>,
        #[arg(long, allow_negative_numbers = true, requires = "e0")]
        s0: Option<f64>,
        #[arg(long, default_value_t = 1)]
        modes: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Why a command stopped. The exit code is part of the interface.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, unreadable or malformed input: exit 2.
    Config(String),
    /// A precondition or inequality failed on valid input: exit 1.
    Domain(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Domain(_) => 1,
        }
    }
}

impl From<gauss_epi::Error> for Failure {
    fn from(e: gauss_epi::Error) -> Self {
        match e {
            gauss_epi::Error::Parse(_) | gauss_epi::Error::DimensionMismatch { .. } => {
                Failure::Config(e.to_string())
            }
            other => Failure::Domain(other.to_string()),
        }
    }
}

/// Result of a command that ran to completion: whether its verdict is
/// positive.
pub type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate(a) => commands::validate(&a),
        Command::Check(a) => commands::check(&a),
        Command::Campaign(a) => commands::campaign(&a),
        Command::Sweep(a) => commands::sweep(&a.kind),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            let msg = match &f {
                Failure::Config(m) => format!("error: {m}"),
                Failure::Domain(m) => format!("failed: {m}"),
            };
            eprintln!("{msg}");
            ExitCode::from(f.code())
        }
    }
}
