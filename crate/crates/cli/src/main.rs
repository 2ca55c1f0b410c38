//! `contactlab`: validate contact models, check the form decomposition on
//! random batches, and build adapted connections from torsion data.
//!
//! Reports go to stdout as JSON and a summary goes to stderr. Exit status is
//! 0 when every check passes, 1 when a check fails and 2 on malformed input
//! or usage errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use contactlab::connection::AdaptedDataFile;
use contactlab::model::builtin;
use contactlab::suites::{self, DataSource};
use contactlab::{CheckSuiteResult, LieContactModel};

const DEFAULT_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(
    name = "contactlab",
    version,
    about = "Torsion and decomposition checks for metric contact structures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Tolerance for pass/fail (default 1e-9, or $CONTACTLAB_TOL).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Comma separated check id prefixes to keep, or `all`.
    #[arg(long, global = true, default_value = "all")]
    checks: String,
}

#[derive(Subcommand)]
enum Command {
    /// Check the invariants of a model and the Nijenhuis identities.
    Validate {
        /// Builtin name (heisenberg3, heis5, su2, noncr5, ...) or a model JSON file.
        #[arg(value_name = "MODEL", required_unless_present = "model_flag")]
        model: Option<String>,
        #[arg(long = "model", conflicts_with = "model")]
        model_flag: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Decompose random vector valued two-forms and check the identities.
    Decompose {
        #[arg(long, default_value_t = 5)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Build the adapted connection with given torsion data and check it.
    Connection {
        #[arg(long)]
        model: String,
        /// `tw`, `random`, `lc-equivalent`, or a data JSON file.
        #[arg(long, default_value = "tw")]
        data: String,
        /// Seed for `--data random`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
}

/// Failure before any check could run; always exit status 2.
struct Structural(String);

impl<E: std::fmt::Display> From<E> for Structural {
    fn from(e: E) -> Self {
        Self(e.to_string())
    }
}

fn tolerance(flag: Option<f64>) -> Result<f64, Structural> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var("CONTACTLAB_TOL") {
            Ok(s) => s
                .trim()
                .parse::<f64>()
                .map_err(|e| Structural(format!("CONTACTLAB_TOL={s}: {e}")))?,
            Err(_) => DEFAULT_TOL,
        },
    };
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Structural(format!("tolerance must be positive, got {tol}")));
    }
    Ok(tol)
}

fn read(path: &Path) -> Result<String, Structural> {
    std::fs::read_to_string(path).map_err(|e| Structural(format!("{}: {e}", path.display())))
}

fn load_model(arg: &str) -> Result<LieContactModel, Structural> {
    if let Some(m) = builtin(arg) {
        return Ok(m);
    }
    let path = Path::new(arg);
    if !path.exists() {
        return Err(Structural(format!(
            "`{arg}` is neither a builtin model nor a file"
        )));
    }
    LieContactModel::from_json(&read(path)?)
        .map_err(|e| Structural(format!("{}: {e}", path.display())))
}

fn data_source(arg: &str, seed: u64, model: &LieContactModel) -> Result<DataSource, Structural> {
    Ok(match arg {
        "tw" => DataSource::TanakaWebster,
        "random" => DataSource::Random(seed),
        "lc-equivalent" => DataSource::LcEquivalent,
        path => {
            let text = read(Path::new(path))?;
            let file = AdaptedDataFile::from_json(&text)
                .map_err(|e| Structural(format!("{path}: {e}")))?;
            DataSource::Given(
                file.into_data(model.dim())
                    .map_err(|e| Structural(format!("{path}: {e}")))?,
            )
        }
    })
}

fn run(cli: Cli) -> Result<(CheckSuiteResult, Common), Structural> {
    Ok(match cli.command {
        Command::Validate {
            model,
            model_flag,
            common,
        } => {
            let tol = tolerance(common.tol)?;
            let arg = model.or(model_flag).expect("clap enforces a model");
            (suites::validate_suite(&load_model(&arg)?, tol), common)
        }
        Command::Decompose {
            dim,
            seed,
            count,
            common,
        } => {
            let tol = tolerance(common.tol)?;
            (suites::decompose_suite(dim, seed, count, tol)?, common)
        }
        Command::Connection {
            model,
            data,
            seed,
            common,
        } => {
            let tol = tolerance(common.tol)?;
            let model = load_model(&model)?;
            let failed = model.validity(tol);
            if !failed.passed() {
                let ids: Vec<_> = failed
                    .checks
                    .iter()
                    .filter(|c| !c.pass)
                    .map(|c| c.id.as_str())
                    .collect();
                return Err(Structural(format!(
                    "model `{}` is invalid: {}",
                    model.name(),
                    ids.join(", ")
                )));
            }
            let source = data_source(&data, seed, &model)?;
            (suites::connection_suite(&model, &source, tol)?, common)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mut report, common) = match run(cli) {
        Ok(r) => r,
        Err(Structural(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    if common.checks != "all" {
        let prefixes: Vec<&str> = common
            .checks
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect();
        report = report.select(&prefixes);
    }
    let json = report.to_json();
    println!("{json}");
    eprint!("{}", report.summary());
    if let Some(path) = &common.out {
        if let Err(e) = std::fs::write(path, format!("{json}\n")) {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
