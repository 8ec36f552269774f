//! `jacobi`: batch front end for jacobi-core with JSON in and out.
//!
//! Exit codes: 0 success or pass, 1 domain failure, 2 usage or parse error.

mod commands;
mod json;

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use jacobi_core::invariance::InvarianceObject;
use jacobi_core::symplectic::Variant;
use serde_json::Value;

use commands::{ActSpace, MetricKind, Output};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
}

impl From<jacobi_core::Error> for CliError {
    fn from(e: jacobi_core::Error) -> Self {
        use jacobi_core::Error::*;
        match e {
            BadShape(_) | DimensionMismatch { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "jacobi", version, about = "Numerics for the real Jacobi group")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Dimension n of sampled objects.
    #[arg(long, global = true, default_value_t = 1)]
    n: usize,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 1000)]
    samples: usize,
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 1e-6)]
    fd_step: f64,
    /// JSON input file; `-` reads stdin.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Symplectic test of a matrix or an embedded group element.
    Check,
    /// Pre-Iwasawa factors of a symplectic matrix.
    Decompose {
        #[arg(long, value_enum, default_value = "plain")]
        variant: VariantArg,
    },
    /// Act with a group element on a point.
    Act {
        #[arg(long, value_enum, default_value = "vu")]
        space: ActSpace,
    },
    /// Left-invariant one-forms in S_n coordinates.
    Oneforms,
    /// Evaluate a metric on two tangent vectors.
    Metric {
        #[arg(long, value_enum, default_value = "metric_xjn")]
        object: MetricKind,
    },
    /// Structure constants of the Jacobi algebra.
    Commutators,
    /// Sampled invariance test of a metric or form.
    Invariance {
        #[arg(long, default_value = "metric_extended")]
        object: String,
    },
    /// Square root of an SPD matrix and its differential.
    SqrtDiff,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum VariantArg {
    Plain,
    Modified,
}

/// Everything a run depends on; equal specs give byte-identical output.
pub struct JobSpec {
    pub n: usize,
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
    pub fd_step: f64,
    pub payload: Option<Value>,
}

fn read_payload(path: Option<&PathBuf>, required: bool) -> Result<Option<Value>, CliError> {
    let text = match path {
        Some(p) if p.as_os_str() == "-" => read_stdin()?,
        Some(p) => fs::read_to_string(p).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?,
        None if required => read_stdin()?,
        None => return Ok(None),
    };
    serde_json::from_str(&text)
        .map(Some)
        .map_err(|e| CliError::Usage(format!("malformed JSON: {e}")))
}

fn read_stdin() -> Result<String, CliError> {
    let mut s = String::new();
    io::stdin()
        .read_to_string(&mut s)
        .map_err(|e| CliError::Usage(format!("stdin: {e}")))?;
    Ok(s)
}

fn run(cli: Cli) -> Result<Output, CliError> {
    let c = cli.common;
    if c.n == 0 || c.samples == 0 {
        return Err(CliError::Usage("--n and --samples must be positive".into()));
    }
    let default_tol = match &cli.command {
        Command::Invariance { object } if object == "lambda_r" => 1e-9,
        Command::Invariance { .. } => 1e-6,
        _ => 1e-10,
    };
    let tol = c.tol.unwrap_or(default_tol);
    if !(tol > 0.0) || !(c.fd_step > 0.0) {
        return Err(CliError::Usage("--tol and --fd-step must be positive".into()));
    }
    let needs_input = matches!(
        cli.command,
        Command::Check | Command::Decompose { .. } | Command::Act { .. } | Command::SqrtDiff
    );
    let job = JobSpec {
        n: c.n,
        seed: c.seed,
        samples: c.samples,
        tol,
        fd_step: c.fd_step,
        payload: read_payload(c.input.as_ref(), needs_input)?,
    };
    match cli.command {
        Command::Check => commands::check(&job),
        Command::Decompose { variant } => commands::decompose_cmd(
            &job,
            match variant {
                VariantArg::Plain => Variant::Plain,
                VariantArg::Modified => Variant::Modified,
            },
        ),
        Command::Act { space } => commands::act(&job, space),
        Command::Oneforms => commands::oneforms(&job),
        Command::Metric { object } => commands::metric(&job, object),
        Command::Commutators => commands::commutators(&job),
        Command::Invariance { object } => {
            let object: InvarianceObject = object.parse().map_err(|e| CliError::Usage(format!("{e}")))?;
            commands::invariance(&job, object)
        }
        Command::SqrtDiff => commands::sqrt_diff(&job),
    }
}

fn write_output(path: Option<&PathBuf>, doc: &Value) -> io::Result<()> {
    let mut text = serde_json::to_string_pretty(doc)?;
    text.push('\n');
    match path {
        Some(p) => fs::write(p, text),
        None => io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.common.output.clone();
    match run(cli) {
        Ok(out) => {
            if let Err(e) = write_output(output.as_ref(), &out.doc) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
