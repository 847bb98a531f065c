//! Command-line front end for `abscomp`.
//!
//! Exit codes: 0 when the checked property holds, 1 when it fails, 2 on usage
//! or input errors.

pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod mesh;
pub mod report;
pub mod verify;

use std::io::Write;
use std::path::PathBuf;

use abscomp::bloch2::Branch;
use abscomp::generators::{GenClass, GenConfig};
use clap::{Args, Parser, Subcommand};

use crate::commands::{Outcome, EXIT_FAILS, EXIT_HOLDS, EXIT_INPUT};
use crate::error::{CliError, CliResult};
use crate::verify::{Suite, VerifyOptions};

#[derive(Debug, Parser)]
#[command(name = "abscomp", version, about = "Absolute compatibility of positive contractions")]
pub struct Cli {
    /// Override the equality tolerance (eig_tol and rank_tol come from ABSCOMP_CONFIG).
    #[arg(long, global = true, value_name = "EQ_TOL")]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    /// First matrix file.
    pub a: PathBuf,
    /// Second matrix file.
    pub b: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide compatibility of two matrices; exit 0 if compatible, 1 if not.
    Check(PairArgs),
    /// Full report: all criteria plus the block certificate.
    Report(PairArgs),
    /// Structural class of a compatible pair.
    Classify(PairArgs),
    /// Write the block factorization (strict pairs) or the frame decomposition.
    Decompose {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value = "decomposition")]
        out_dir: PathBuf,
    },
    /// Export the partner spheroid of a 2x2 matrix as CSV.
    Ellipsoid {
        a: PathBuf,
        #[arg(long, default_value = "16x16", value_parser = mesh::parse_grid)]
        grid: (usize, usize),
        /// Output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The non-commuting partner of a 2x2 matrix on the given branch.
    Partner {
        a: PathBuf,
        #[arg(long, value_parser = parse_branch)]
        branch: Branch,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a random sample of a structured class.
    Gen {
        #[arg(long, value_parser = parse_class)]
        class: GenClass,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        stream: u64,
        #[arg(long, default_value_t = GenConfig::DEFAULT_MARGIN)]
        margin: f64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run randomized property suites; exit 0 iff there are no violations.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 500)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        parallel: bool,
        #[arg(long, hide = true)]
        inject_perturbation: bool,
    },
}

fn parse_branch(s: &str) -> Result<Branch, String> {
    s.parse()
}

fn parse_class(s: &str) -> Result<GenClass, String> {
    s.parse().map_err(|e: abscomp::Error| e.to_string())
}

pub fn execute(cli: &Cli) -> CliResult<Outcome> {
    let pol = config::from_env(cli.tol)?;
    match &cli.command {
        Command::Check(p) => commands::check(&p.a, &p.b, &pol),
        Command::Report(p) => commands::report(&p.a, &p.b, &pol),
        Command::Classify(p) => commands::classify(&p.a, &p.b, &pol),
        Command::Decompose { pair, out_dir } => commands::decompose(&pair.a, &pair.b, out_dir, &pol),
        Command::Ellipsoid { a, grid, out } => commands::ellipsoid(a, *grid, out.as_deref(), &pol),
        Command::Partner { a, branch, out } => commands::partner_cmd(a, *branch, out.as_deref(), &pol),
        Command::Gen { class, n, seed, stream, margin, out } => {
            let cfg = GenConfig::new(*class, *n, *seed)?.with_stream(*stream).with_margin(*margin)?;
            commands::gen(&cfg, out, &pol)
        }
        Command::Verify { suite, trials, seed, parallel, inject_perturbation } => {
            let opts = VerifyOptions {
                suite: *suite,
                trials: *trials,
                seed: *seed,
                parallel: *parallel,
                inject_perturbation: *inject_perturbation,
            };
            let (report, violations) = verify::verify(&opts, &pol)?;
            let code = if violations == 0 { EXIT_HOLDS } else { EXIT_FAILS };
            Ok(Outcome { code, report: Some(report), stdout: None })
        }
    }
}

/// Runs a parsed command, printing its output, and returns the exit code.
pub fn run(cli: &Cli) -> u8 {
    match execute(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if let Some(text) = &out.stdout {
                let _ = stdout.write_all(text.as_bytes());
            }
            if let Some(report) = &out.report {
                let _ = write!(stdout, "{report}");
            }
            out.code
        }
        Err(e) => {
            report_error(&e);
            EXIT_INPUT
        }
    }
}

fn report_error(e: &CliError) {
    eprintln!("error: {e}");
}
