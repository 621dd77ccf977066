//! `welfarelab` — command-line driver for the social-choice and welfare
//! toolkit.
//!
//! Four subcommands cover the library surface:
//!
//! * `choice` — per-agent or mixture-planner choice distributions on a menu,
//!   exact or Monte Carlo (`--sampled`).
//! * `check-utilitarian` — per-menu utilitarian feasibility verdicts with
//!   machine-checkable certificates; exit 4 when a violation is certified.
//! * `cv` — compensating-variation quantiles, the average CV, the
//!   median-vs-mean diagnosis, and optionally the full CV distribution grid.
//! * `example` — built-in worked examples (`euw`, `diamond`, `condorcet`,
//!   `median-counterexample`) that recompute published quantities and check
//!   them against expectations; exit 4 when any check fails.
//!
//! Exit codes are exactly: 0 success / all checks pass, 2 input error
//! (flags, scenario schema, missing sections), 3 computation domain error,
//! 4 certified violation or failed example expectation.
//!
//! Output is byte-identical across reruns with the same inputs. The
//! `WELFARELAB_SEED` environment variable overrides `--seed` when set.

mod commands;
mod output;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use output::Format;

/// Classified CLI failure: carries the message and the exit code.
#[derive(Debug)]
pub struct CliError {
    kind: ErrorKind,
    message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ErrorKind {
    /// Bad flags, unreadable files, schema violations, missing sections.
    Input,
    /// The computation itself failed (solver, bracketing, domain).
    Domain,
}

impl CliError {
    /// An input-classified error (exit 2).
    pub fn input(message: String) -> Self {
        CliError {
            kind: ErrorKind::Input,
            message,
        }
    }

    /// A domain-classified error (exit 3).
    pub fn domain(message: String) -> Self {
        CliError {
            kind: ErrorKind::Domain,
            message,
        }
    }

    /// Wraps a library error, keeping its input/domain classification and
    /// prefixing the location.
    pub fn core(context: impl std::fmt::Display, e: welfarelab::Error) -> Self {
        let mut err = CliError::from(e);
        err.message = format!("{context}: {}", err.message);
        err
    }

    /// The process exit code for this error.
    pub fn exit_code(&self) -> u8 {
        match self.kind {
            ErrorKind::Input => 2,
            ErrorKind::Domain => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<welfarelab::Error> for CliError {
    fn from(e: welfarelab::Error) -> Self {
        use welfarelab::Error as E;
        match e {
            E::LpFailure(_) | E::DomainError(_) | E::BracketError { .. } => {
                CliError::domain(e.to_string())
            }
            _ => CliError::input(e.to_string()),
        }
    }
}

/// Shared run configuration resolved from flags and environment.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Base RNG seed (`WELFARELAB_SEED` overrides the flag).
    pub seed: u64,
    /// Monte Carlo sample count.
    pub samples: u64,
    /// Numerical tolerance for verdicts.
    pub tol: f64,
    /// Output format.
    pub format: Format,
    /// Output path (stdout when absent).
    pub output: Option<PathBuf>,
}

#[derive(Parser, Debug)]
#[command(
    name = "welfarelab",
    version,
    about = "Utilitarian social choice and distributional welfare analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Scenario file (TOML).
    #[arg(long, global = true, value_name = "FILE")]
    scenario: Option<PathBuf>,

    /// RNG seed for sampled computations.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Monte Carlo sample count.
    #[arg(long, global = true, default_value_t = 100_000)]
    samples: u64,

    /// Numerical tolerance for feasibility verdicts.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write output to this path instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Choice distributions on one menu: per-agent rows, or the
    /// mixture-planner row when --weights is given.
    Choice {
        /// Menu id from the scenario file.
        #[arg(long, value_name = "ID")]
        menu: String,
        /// Mixture weights over the profile's agents (comma-separated).
        #[arg(
            long,
            value_delimiter = ',',
            allow_negative_numbers = true,
            value_name = "W,W,..."
        )]
        weights: Option<Vec<f64>>,
        /// Estimate rows by Monte Carlo instead of exact enumeration
        /// (reports standard errors).
        #[arg(long)]
        sampled: bool,
    },
    /// Check whether the planner is a behavioral utilitarian on each menu;
    /// certified violations exit 4 with the separating witness reported.
    CheckUtilitarian {
        /// Restrict the check to one menu id (default: all menus).
        #[arg(long, value_name = "ID")]
        menu: Option<String>,
        /// Planner as mixture weights over the profile's agents
        /// (overrides the scenario's [planner] section).
        #[arg(
            long,
            value_delimiter = ',',
            allow_negative_numbers = true,
            value_name = "W,W,..."
        )]
        weights: Option<Vec<f64>>,
        /// Random agreement probes per menu used to spot-check the bounds
        /// characterization.
        #[arg(long, default_value_t = 16, value_name = "N")]
        probes: u32,
    },
    /// Compensating-variation quantiles and diagnosis for a price change.
    Cv {
        /// Price-change id from the scenario file.
        #[arg(long, value_name = "ID")]
        change: String,
        /// Quantile orders in (0,1), comma-separated.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "0.25,0.5,0.75",
            allow_negative_numbers = true,
            value_name = "T,T,..."
        )]
        tau: Vec<f64>,
        /// Population weights over consumer types (default: the scenario's
        /// shares).
        #[arg(
            long,
            value_delimiter = ',',
            allow_negative_numbers = true,
            value_name = "A,A,..."
        )]
        alpha: Option<Vec<f64>>,
        /// Also emit the CV distribution function on a grid of this many
        /// points across its support.
        #[arg(long, value_name = "N")]
        grid: Option<u32>,
    },
    /// Run a built-in worked example and verify its expected values.
    Example {
        /// Which example to run.
        name: ExampleName,
        /// Preference-shock scale in (0, 1/2) (condorcet only).
        #[arg(long, value_name = "X")]
        eta: Option<f64>,
        /// Triangular density perturbation in (0, 1/(2π)] (condorcet only).
        #[arg(long, value_name = "X")]
        delta: Option<f64>,
        /// Angular offset of the lottery alternatives in (0, π/6)
        /// (condorcet only).
        #[arg(long, value_name = "X")]
        eps_angle: Option<f64>,
        /// Angle interval `lo,hi` for the uniform reference density
        /// (condorcet only).
        #[arg(long, value_delimiter = ',', value_name = "LO,HI")]
        interval: Option<Vec<f64>>,
    },
}

/// Built-in example names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExampleName {
    /// Expected-utilitarian planner vs the agent mixture on a two-option
    /// menu.
    Euw,
    /// Sure thing vs fair randomization between two symmetric claimants.
    Diamond,
    /// Random-dictator Condorcet cycle smoothed by preference shocks.
    Condorcet,
    /// Median welfare ranking that defies both claimants' preferences.
    MedianCounterexample,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // Clap renders help/version as "errors" too; its exit() prints to
        // the right stream and uses 0 for those, 2 for genuine usage errors.
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

/// Dispatches a parsed invocation; returns the success exit code (0 or 4).
fn run(cli: Cli) -> Result<u8, CliError> {
    let mut seed = cli.seed;
    if let Ok(v) = std::env::var("WELFARELAB_SEED") {
        seed = v
            .parse::<u64>()
            .map_err(|e| CliError::input(format!("WELFARELAB_SEED must be an integer: {e}")))?;
    }
    if cli.samples == 0 {
        return Err(CliError::input("--samples must be at least 1".into()));
    }
    // NaN must fail too, so compare through the complement.
    if cli.tol.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
        return Err(CliError::input("--tol must be positive".into()));
    }
    let run = RunConfig {
        seed,
        samples: cli.samples,
        tol: cli.tol,
        format: cli.format,
        output: cli.output.clone(),
    };

    match cli.command {
        Command::Choice {
            menu,
            weights,
            sampled,
        } => commands::cmd_choice(
            cli.scenario.as_deref(),
            &menu,
            weights.as_deref(),
            sampled,
            &run,
        ),
        Command::CheckUtilitarian {
            menu,
            weights,
            probes,
        } => commands::cmd_check_utilitarian(
            cli.scenario.as_deref(),
            menu.as_deref(),
            weights.as_deref(),
            probes,
            &run,
        ),
        Command::Cv {
            change,
            tau,
            alpha,
            grid,
        } => commands::cmd_cv(
            cli.scenario.as_deref(),
            &change,
            &tau,
            alpha.as_deref(),
            grid,
            &run,
        ),
        Command::Example {
            name,
            eta,
            delta,
            eps_angle,
            interval,
        } => commands::cmd_example(name, eta, delta, eps_angle, interval.as_deref(), &run),
    }
}

/// Resolves the required `--scenario` flag into a parsed file.
fn load_scenario(path: Option<&std::path::Path>) -> Result<scenario::ScenarioFile, CliError> {
    let path =
        path.ok_or_else(|| CliError::input("this subcommand requires --scenario FILE".into()))?;
    scenario::ScenarioFile::load(path)
}
