//! Job files, subcommands and JSON reports for the `igt` binary.

pub mod commands;
pub mod error;
pub mod job;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;

pub use commands::Options;
pub use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "igt",
    version,
    about = "Invariant complete intersections from finite linear groups"
)]
pub struct Cli {
    /// Seed for randomized submodule extraction.
    #[arg(long, env = "IGT_SEED", default_value_t = 0, global = true)]
    pub seed: u64,
    /// Bound on the number of enumerated group elements.
    #[arg(long, default_value_t = igt_core::grp::DEFAULT_CAP, global = true)]
    pub cap: usize,
    /// Add wall-clock time to the report (makes output non-reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate the group and validate the representation.
    Check { job: PathBuf },
    /// Character table by Dixon–Schneider.
    CharTable { job: PathBuf },
    /// Families of invariant t-dimensional subspaces of degree-d forms.
    Families {
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        codim: u32,
        /// Ideal file to locate inside a one-parameter family.
        #[arg(long)]
        locate: Option<PathBuf>,
        job: PathBuf,
    },
    /// Subgroup acting symplectically on the complete intersection of an ideal.
    Symplectic {
        #[arg(long)]
        ideal: PathBuf,
        job: PathBuf,
    },
    /// Projectively faithful characters of a given degree, modulo linear twists.
    Pfr {
        #[arg(long)]
        dim: u32,
        /// Skip the check that the kernel lies in the derived subgroup.
        #[arg(long)]
        assume_schur_cover: bool,
        job: PathBuf,
    },
    /// Discriminant form of a net of three quadrics.
    Discriminant {
        #[arg(long)]
        ideal: PathBuf,
        /// Off-diagonal entries: half coefficients (xᵀGx = q) or full coefficients.
        #[arg(long, value_enum, default_value_t = Gram::Half)]
        gram: Gram,
    },
    /// Decomposability test for a t-vector given by wedge coordinates.
    PureTensor {
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Gram {
    Half,
    Coefficient,
}

impl From<Gram> for igt_core::varsearch::GramConvention {
    fn from(g: Gram) -> Self {
        match g {
            Gram::Half => Self::Half,
            Gram::Coefficient => Self::Coefficient,
        }
    }
}

#[derive(Debug, Serialize)]
struct Envelope<T: Serialize> {
    command: &'static str,
    seed: u64,
    report: T,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_ms: Option<u128>,
}

/// Output text and exit code of one invocation.
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

fn render<T: Serialize>(cli: &Cli, command: &'static str, report: T, start: Instant) -> String {
    let env = Envelope {
        command,
        seed: cli.seed,
        report,
        timing_ms: cli.timing.then(|| start.elapsed().as_millis()),
    };
    serde_json::to_string_pretty(&env).expect("reports serialize") + "\n"
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let opts = Options {
        seed: cli.seed,
        cap: cli.cap,
    };
    let start = Instant::now();
    let ok = |stdout| Outcome { stdout, code: 0 };
    Ok(match &cli.command {
        Command::Check { job } => {
            let r = commands::check(job, opts)?;
            let code = if r.all_ok() { 0 } else { 3 };
            Outcome {
                stdout: render(cli, "check", r, start),
                code,
            }
        }
        Command::CharTable { job } => ok(render(
            cli,
            "char-table",
            commands::char_table(job, opts)?,
            start,
        )),
        Command::Families {
            degree,
            codim,
            locate,
            job,
        } => ok(render(
            cli,
            "families",
            commands::families(job, *degree, *codim, locate.as_deref(), opts)?,
            start,
        )),
        Command::Symplectic { ideal, job } => ok(render(
            cli,
            "symplectic",
            commands::symplectic(job, ideal, opts)?,
            start,
        )),
        Command::Pfr {
            dim,
            assume_schur_cover,
            job,
        } => ok(render(
            cli,
            "pfr",
            commands::pfr(job, *dim, *assume_schur_cover, opts)?,
            start,
        )),
        Command::Discriminant { ideal, gram } => ok(render(
            cli,
            "discriminant",
            commands::discriminant(ideal, (*gram).into())?,
            start,
        )),
        Command::PureTensor { file } => ok(render(
            cli,
            "pure-tensor",
            commands::pure_tensor(file)?,
            start,
        )),
    })
}

/// Diagnostic document for a failed invocation.
pub fn error_json(e: &CliError) -> String {
    serde_json::json!({ "error": { "kind": e.kind(), "exit_code": e.exit_code(), "message": e.to_string() } }).to_string()
}
