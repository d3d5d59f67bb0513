//! `fibrepos`: invariants, f-positivity, cones and Chow-stability arithmetic
//! for complete intersections in projective bundles over a curve.
//!
//! Exit codes: 0 when every check passed, 1 when an internal inconsistency
//! was detected, 2 for invalid input.

mod commands;
mod input;
mod report;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use input::{load_instance, ContactFile, Document};
use report::Run;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("cannot read {}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("cannot parse {}: {msg}", path.display())]
    Parse { path: PathBuf, msg: String },
    #[error(transparent)]
    Core(#[from] fibrepos::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_inconsistency() => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "fibrepos", version, about = "Exact f-positivity and cone computations for relative complete intersections")]
struct Cli {
    /// Emit one JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rank and degree of f_*O_X(h), L^n, fibre degree and K_f.
    Invariants {
        file: PathBuf,
        /// Overrides h from the file.
        #[arg(long = "h")]
        h: Option<i64>,
    },
    /// f-positivity verdict with per-h margins and asymptotic threshold.
    Positivity {
        file: PathBuf,
        #[arg(long = "h")]
        h: Option<i64>,
        /// Bound on threshold refinement steps (default 10·Σk_i).
        #[arg(long)]
        max_h: Option<i64>,
    },
    /// Nef, B and pseudoeffective cones from Harder-Narasimhan data.
    Cones { file: PathBuf },
    /// Chow instability of fibres, or contact-order arithmetic for a
    /// filtration file.
    Stability {
        file: PathBuf,
        #[arg(long)]
        max_h: Option<i64>,
    },
    /// Randomized consistency sweep.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: u64,
    },
}

fn max_scan(max_h: Option<i64>, inst: &input::Instance) -> i64 {
    max_h.unwrap_or(10 * inst.spec.sum_k())
}

fn run(cmd: Command) -> Result<Run, CliError> {
    match cmd {
        Command::Invariants { file, h } => {
            let (raw, inst) = load_instance(&file)?;
            commands::invariants(&raw, &inst, h)
        }
        Command::Positivity { file, h, max_h } => {
            let (raw, inst) = load_instance(&file)?;
            commands::positivity(&raw, &inst, h, max_scan(max_h, &inst))
        }
        Command::Cones { file } => {
            let (raw, inst) = load_instance(&file)?;
            commands::cones(&raw, &inst)
        }
        Command::Stability { file, max_h } => {
            let doc = Document::load(&file)?;
            if doc.has_key("filtration") {
                let raw: ContactFile = doc.parse(&file)?;
                let input = raw.validate()?;
                commands::stability_contact(&raw, &input)
            } else {
                let raw: input::InstanceFile = doc.parse(&file)?;
                let inst = raw.validate()?;
                commands::stability_instance(&raw, &inst, max_scan(max_h, &inst))
            }
        }
        Command::Verify { seed, count } => commands::verify(seed, count),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            let body = if cli.json {
                let mut s = serde_json::to_string_pretty(&out.report).expect("reports serialize");
                s.push('\n');
                s
            } else {
                out.render_text()
            };
            // a closed pipe is not worth a panic
            let _ = io::stdout().write_all(body.as_bytes());
            if out.report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
