//! Command-line front end. Every command reads JSON, writes a versioned JSON
//! envelope (or a short text summary) and optionally a CSV series.
//!
//! Exit codes: 0 when the computation completed, whatever the verdict; 2 for
//! unreadable or invalid input; 3 when a numerical method gave up.

mod batch;
mod commands;
mod input;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

pub use batch::{run_batch, BatchManifest};
pub use commands::{execute, Job, Output};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliError {
    #[error("invalid input{}: {message}", at(pointer))]
    Input { pointer: String, message: String },
    #[error("numerical failure: {0}")]
    Numerical(String),
}

fn at(pointer: &str) -> String {
    if pointer.is_empty() {
        String::new()
    } else {
        format!(" at {pointer}")
    }
}

impl CliError {
    pub fn input_at(pointer: impl Into<String>, message: impl ToString) -> Self {
        CliError::Input { pointer: pointer.into(), message: message.to_string() }
    }

    pub fn input(message: impl ToString) -> Self {
        CliError::Input { pointer: String::new(), message: message.to_string() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input { .. } => EXIT_INPUT,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CliError::Input { pointer, message } => json!({"kind": "input", "pointer": pointer, "message": message}),
            CliError::Numerical(m) => json!({"kind": "numerical", "message": m}),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "stabkit", version, about = "Stability computations from geometric invariant theory")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalOpts,
}

#[derive(Debug, Clone, Args, Default)]
pub struct GlobalOpts {
    /// Print the full JSON envelope instead of a summary.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the command's series (trace, profile, weights) to this CSV file.
    #[arg(long, global = true, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    /// Seed for randomized commands; recorded in every output.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Tolerance override for flows and balancing.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hilbert–Mumford test for a torus weight system.
    Hm {
        input: PathBuf,
        /// Also enumerate primitive one-parameter subgroups with entries up to this bound.
        #[arg(long)]
        brute_force: Option<i64>,
    },
    /// Newton-polytope test for a hypersurface.
    Hypersurface { input: PathBuf },
    /// Weighted points on the projective line.
    Points {
        #[command(subcommand)]
        action: PointsCmd,
    },
    /// Moment-map flow on a gallery instance.
    Flow {
        input: PathBuf,
        #[arg(long)]
        max_iters: Option<usize>,
    },
    /// Balanced metrics on the projective line.
    Metric {
        #[command(subcommand)]
        action: MetricCmd,
    },
    /// Slope stability of families and sheaves.
    Slope {
        #[command(subcommand)]
        action: SlopeCmd,
    },
    /// Normal-cone weights of a family against their trapezium estimate.
    Weights(WeightsArgs),
    /// Donaldson–Futaki coefficient of a normal-cone degeneration.
    Df(DfArgs),
    /// Runs one command over many inputs.
    Batch { manifest: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum PointsCmd {
    Classify { input: PathBuf },
    Balance {
        input: PathBuf,
        #[arg(long)]
        max_iters: Option<usize>,
    },
    /// Random configurations checked against the classification.
    Suite {
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 8)]
        max_total: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum MetricCmd {
    Balance {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        phi: PathBuf,
        #[arg(long, default_value_t = 500)]
        max_iter: usize,
    },
    Expansion {
        #[arg(long)]
        phi: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = [12usize, 16, 20])]
        degrees: Vec<usize>,
    },
    Energy {
        #[arg(long)]
        phi: PathBuf,
        #[arg(long, default_value_t = 40)]
        steps: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum SlopeCmd {
    Classify {
        #[arg(long)]
        family: PathBuf,
    },
    Mu {
        #[arg(long)]
        family: PathBuf,
        #[arg(long, default_value = "1")]
        c: String,
    },
    Chow {
        #[arg(long)]
        family: PathBuf,
        #[arg(long, default_value_t = 1)]
        c: u32,
    },
    /// Gieseker and slope comparison of a sheaf with candidate subsheaves.
    Sheaf { input: PathBuf },
    /// `μ_c` sampled on `(0, ε]`.
    Series {
        #[arg(long)]
        family: PathBuf,
        #[arg(long, default_value_t = 32)]
        steps: usize,
    },
    Weights(WeightsArgs),
    Df(DfArgs),
}

#[derive(Debug, Clone, Args)]
pub struct WeightsArgs {
    #[arg(long)]
    pub family: PathBuf,
    #[arg(long, default_value = "1")]
    pub c: String,
    #[arg(long, default_value_t = 5)]
    pub r_min: i64,
    #[arg(long, default_value_t = 50)]
    pub r_max: i64,
    /// Table mode: weigh `H⁰(L^{rk})` for these `k` as well.
    #[arg(long, value_delimiter = ',')]
    pub k: Vec<i64>,
}

/// Either `--family` (weights computed from the family) or `--weights`, a file
/// holding `{hilbert, weights}`.
#[derive(Debug, Clone, Args)]
pub struct DfArgs {
    #[arg(long, required_unless_present = "weights", conflicts_with = "weights")]
    pub family: Option<PathBuf>,
    #[arg(long)]
    pub weights: Option<PathBuf>,
    #[arg(long, default_value = "1")]
    pub c: String,
}

/// Parses arguments, runs the command and writes its output; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let name = commands::command_name(&cli.command);
    let outcome = commands::dispatch(&cli.command, &cli.global);
    let (code, body) = match outcome {
        Ok(out) => {
            if let (Some(path), Some(csv)) = (&cli.global.csv, &out.csv) {
                if let Err(e) = std::fs::write(path, csv) {
                    let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                    return EXIT_INPUT;
                }
            }
            (EXIT_OK, json!({"schema_version": SCHEMA_VERSION, "command": name, "seed": cli.global.seed, "result": out.result}))
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            (e.exit_code(), json!({"schema_version": SCHEMA_VERSION, "command": name, "seed": cli.global.seed, "error": e.to_json()}))
        }
    };
    let text = if cli.global.json || code != EXIT_OK {
        serde_json::to_string_pretty(&body).expect("JSON values serialize")
    } else {
        summary(&body["result"])
    };
    let _ = writeln!(out, "{text}");
    code
}

/// One `key: value` line per top-level field.
fn summary(v: &Value) -> String {
    match v {
        Value::Object(m) => m
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}: {s}"),
                other => format!("{k}: {other}"),
            })
            .collect::<Vec<_>>()
            .join("\n"),
        other => other.to_string(),
    }
}
