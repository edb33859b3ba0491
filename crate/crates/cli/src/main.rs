//! `spectral-lab` command-line front end.
//!
//! Every subcommand writes a JSON summary and, for tabular results, a CSV
//! table, either to stdout or to `<out-dir>/<name>.{json,csv}`. Errors are
//! printed to stderr as `{"error": {"kind", "message", "exit_code"}}` with
//! exit code 2 (bad input), 3 (computation failed) or 4 (not found).

mod commands;
mod output;
mod parse;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{Map, Value};

use output::Format;

#[derive(Debug)]
pub enum CliError {
    Schema(String),
    NotFound(String),
    Compute(String),
    Lib(spectral_lab::Error),
    Io(std::io::Error),
}

impl From<spectral_lab::Error> for CliError {
    fn from(e: spectral_lab::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn kind_and_code(&self) -> (&'static str, u8) {
        use spectral_lab::Error as E;
        match self {
            CliError::Schema(_) => ("schema", 2),
            CliError::NotFound(_) => ("not_found", 4),
            CliError::Compute(_) | CliError::Io(_) => ("computation", 3),
            CliError::Lib(e) => match e {
                E::NotFound(_) | E::NotAnEigenvalue(_) => ("not_found", 4),
                E::InvalidArgument(_)
                | E::BadBounds { .. }
                | E::NonUnitCoefficients { .. }
                | E::DimensionMismatch { .. }
                | E::OverlappingRects(..)
                | E::MissingExact { .. } => ("schema", 2),
                _ => ("computation", 3),
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Schema(m) | CliError::NotFound(m) | CliError::Compute(m) => m.clone(),
            CliError::Lib(e) => e.to_string(),
            CliError::Io(e) => e.to_string(),
        }
    }

    fn report(&self) -> ExitCode {
        let (kind, code) = self.kind_and_code();
        let obj = serde_json::json!({ "error": { "kind": kind, "message": self.message(), "exit_code": code } });
        eprintln!("{obj}");
        ExitCode::from(code)
    }
}

#[derive(Parser, Debug)]
#[command(name = "spectral-lab", version, about = "Spectral functionals and eigenfunction concentration bounds")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write `<name>.json` / `<name>.csv` here instead of stdout.
    #[arg(long, global = true, env = "SPECTRAL_LAB_OUT_DIR")]
    out_dir: Option<PathBuf>,
    /// Worker threads for scans (default: all cores). Never changes output.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// JSON run configuration instead of a subcommand.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Debug, Clone)]
pub struct PairArgs {
    #[arg(long)]
    pub op1: String,
    #[arg(long)]
    pub op2: String,
    #[arg(long)]
    pub lambda_max: f64,
    /// Exact rational comparison or tolerance clustering. Default: exact when
    /// both operators have exact spectra.
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Clustering tolerance for floating mode (default 1e-9 * lambda-max).
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Floating,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Direct,
    Composite,
    Both,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Eigenvalues of a 1D operator.
    Spectrum {
        #[arg(long)]
        op: String,
        #[arg(long, required_unless_present = "lambda_max")]
        count: Option<usize>,
        #[arg(long)]
        lambda_max: Option<f64>,
    },
    /// Product spectrum with multiplicities and collision classes.
    Product(PairArgs),
    /// Minimal multiplicity check up to a cutoff.
    Mm(PairArgs),
    /// Scalings s in a window at which the product acquires collisions.
    Dilatation {
        #[arg(long)]
        op1: String,
        #[arg(long)]
        op2: String,
        /// Exponent of s applied to the second factor, as p or p/q.
        #[arg(long, default_value = "1")]
        alpha: String,
        #[arg(long)]
        s_min: f64,
        #[arg(long)]
        s_max: f64,
        #[arg(long)]
        lambda_max: f64,
    },
    /// Eigenfunction-mass infimum on a set: 1D with --op, product with --op1/--op2.
    Gfunc {
        #[arg(long, conflicts_with_all = ["op1", "op2"], required_unless_present_all = ["op1", "op2"])]
        op: Option<String>,
        #[arg(long, requires = "op2")]
        op1: Option<String>,
        #[arg(long, requires = "op1")]
        op2: Option<String>,
        /// JSON intervals (1D) or rectangles (product).
        #[arg(long)]
        omega: String,
        #[arg(long)]
        lambda_max: f64,
        /// Product sets only.
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        /// Restrict to eigenvalues in [window * lambda-max, lambda-max].
        #[arg(long)]
        window: Option<f64>,
    },
    /// Dirichlet square [0, π]²: eigenspaces and concentration constants.
    Square {
        #[command(subcommand)]
        action: SquareCmd,
    },
    /// Tubes around straight geodesics.
    Tube {
        #[command(subcommand)]
        action: TubeCmd,
    },
}

#[derive(Subcommand, Debug)]
pub enum SquareCmd {
    /// C_ω(λ) for every eigenvalue λ <= lambda-max.
    Scan {
        #[arg(long)]
        omega: String,
        #[arg(long)]
        lambda_max: u64,
    },
    /// C_ω(λ) and its minimizing coefficients at one eigenvalue.
    Value {
        #[arg(long)]
        omega: String,
        #[arg(long)]
        lambda: u64,
    },
    /// Smallest λ with at least p representations as a sum of two squares.
    MinLambda {
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = 1_000_000)]
        limit: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum TubeCmd {
    /// Tube lower bound for each ε (bound formula and direct).
    Scan {
        #[arg(long)]
        geodesic: String,
        #[arg(long)]
        eps_list: String,
        /// Default: Dirichlet on the first side of the geodesic's domain.
        #[arg(long)]
        op1: Option<String>,
        /// Default: Dirichlet on the second side.
        #[arg(long)]
        op2: Option<String>,
        #[arg(long, default_value_t = 1000.0)]
        lambda_max: f64,
        #[arg(long, default_value_t = spectral_lab::tube_lab::DEFAULT_X_RESOLUTION)]
        resolution: usize,
        /// Covering scale (default T/8).
        #[arg(long)]
        eta: Option<f64>,
    },
    /// Inner and outer rectangle approximations of the tube complement.
    Complement {
        #[arg(long)]
        geodesic: String,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = spectral_lab::tube_lab::DEFAULT_X_RESOLUTION)]
        resolution: usize,
        #[arg(long)]
        eta: Option<f64>,
    },
}

/// `{"subcommand": "square scan", "parameters": {"omega": [...], "lambda_max": 5000}}`.
/// Parameter names are the long flags with `_` or `-`.
#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct RunConfig {
    subcommand: String,
    #[serde(default)]
    parameters: Map<String, Value>,
    /// Reserved for randomized suites; no subcommand draws random numbers.
    #[serde(default)]
    #[allow(dead_code)]
    seed: Option<u64>,
    #[serde(default)]
    format: Option<Format>,
    #[serde(default)]
    out_dir: Option<PathBuf>,
    #[serde(default)]
    threads: Option<usize>,
}

fn config_argv(cfg: &RunConfig) -> Vec<String> {
    let mut argv = vec!["spectral-lab".to_string()];
    argv.extend(cfg.subcommand.split_whitespace().map(str::to_string));
    for (k, v) in &cfg.parameters {
        let flag = format!("--{}", k.replace('_', "-"));
        match v {
            Value::Bool(true) => argv.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::String(s) => argv.extend([flag, s.clone()]),
            other => argv.extend([flag, other.to_string()]),
        }
    }
    argv
}

fn parse_args<I, T>(argv: I) -> Result<Cli, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(argv) {
        Ok(c) => Ok(c),
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            e.exit()
        }
        Err(e) => Err(CliError::Schema(e.to_string().trim().to_string())),
    }
}

fn run() -> Result<(), CliError> {
    let mut cli = parse_args(std::env::args_os())?;
    if let Some(path) = cli.config.take() {
        if cli.command.is_some() {
            return Err(CliError::Schema("--config replaces the subcommand; give one or the other".into()));
        }
        let text = std::fs::read_to_string(&path)?;
        let cfg: RunConfig =
            serde_json::from_str(&text).map_err(|e| CliError::Schema(format!("bad config {}: {e}", path.display())))?;
        let inner = parse_args(config_argv(&cfg))?;
        cli = Cli {
            format: cli.format.or(cfg.format),
            out_dir: cli.out_dir.or(cfg.out_dir),
            threads: cli.threads.or(cfg.threads),
            config: None,
            command: inner.command,
        };
    }
    let command = cli.command.ok_or_else(|| CliError::Schema("no subcommand given".into()))?;
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Compute(e.to_string()))?;
    }
    let report = commands::run(command)?;
    let format = cli.format.unwrap_or(if report.table.is_some() && cli.out_dir.is_some() {
        Format::Both
    } else {
        Format::Json
    });
    output::emit(&report, format, cli.out_dir.as_deref())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => e.report(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn clap_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn config_maps_to_flags() {
        let cfg: RunConfig = serde_json::from_str(
            r#"{"subcommand": "square scan", "parameters": {"omega": [[0, 1, 0, 1]], "lambda_max": 50}, "seed": 7}"#,
        )
        .unwrap();
        assert_eq!(config_argv(&cfg), ["spectral-lab", "square", "scan", "--lambda-max", "50", "--omega", "[[0,1,0,1]]"]);
        assert!(serde_json::from_str::<RunConfig>(r#"{"subcommand": "mm", "bogus": 1}"#).is_err());
    }
}
