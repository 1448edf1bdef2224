//! Command-line harness over `tritile-core`: enumeration, move-graph
//! components, invariants, refinement, random walks and verification suites.

pub mod args;
pub mod commands;
pub mod error;
pub mod report;
pub mod verify;

use clap::{Parser, Subcommand};
use commands::Moves;
use error::CliError;
use report::{command_line, Format, Report};
use std::sync::Arc;
use tritile_core::{Axis, Region};
use verify::{Suite, VerifyOptions};

#[derive(Debug, Parser)]
#[command(name = "tritile", version, about = "Domino tilings of three-dimensional regions")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate every tiling of a region.
    Enumerate {
        /// `box L M N`, `torus a b c`, or a region file.
        region: Vec<String>,
        /// Report only the number of tilings.
        #[arg(long)]
        count_only: bool,
    },
    /// Connected components of the flip or flip+trit graph.
    Components {
        region: Vec<String>,
        #[arg(long, value_enum, default_value_t = Moves::Flip)]
        moves: Moves,
    },
    /// Flux, modulus and twist of a tiling.
    Invariants {
        region: Vec<String>,
        /// Tiling file; defaults to a base tiling of the region.
        #[arg(long)]
        tiling: Option<String>,
        /// Axis of the base tiling to use when no file is given.
        #[arg(long, value_parser = parse_axis)]
        base: Option<Axis>,
    },
    /// Refine a tiling by 5×5×5 subdivision and compare invariants.
    Refine {
        region: Vec<String>,
        #[arg(long)]
        tiling: Option<String>,
        #[arg(long, value_parser = parse_axis)]
        base: Option<Axis>,
        /// Number of refinement rounds.
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Also write the refined tiling to this file.
        #[arg(long)]
        tiling_out: Option<String>,
    },
    /// Seeded random walk with a twist histogram.
    Sample {
        region: Vec<String>,
        #[arg(long, value_enum, default_value_t = Moves::Fliptrit)]
        moves: Moves,
        #[arg(long, default_value_t = 10_000)]
        steps: u64,
        /// Starting tiling file; defaults to a base tiling.
        #[arg(long)]
        start: Option<String>,
    },
    /// Run a verification suite; the exit code is 0 exactly when every check passes.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Optional region overriding the suite's default.
        region: Vec<String>,
        /// Random tilings for the euler suite.
        #[arg(long, default_value_t = 100)]
        tilings: usize,
        /// Torus samples for the refine suite.
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
}

fn parse_axis(s: &str) -> Result<Axis, String> {
    s.parse()
}

/// What a run produced: the rendered report or an error message, and the exit code.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Run the CLI on arguments that exclude the program name.
pub fn run(argv: &[String]) -> Outcome {
    let full: Vec<String> = std::iter::once("tritile".to_string()).chain(argv.iter().cloned()).collect();
    let cli = match Cli::try_parse_from(&full) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&cli, argv) {
        Ok(report) => {
            let code = if report.success { 0 } else { 1 };
            match report.render(cli.format) {
                Ok(text) => match &cli.out {
                    Some(path) => match args::write(path, &text) {
                        Ok(()) => Outcome { code, stdout: String::new(), stderr: String::new() },
                        Err(e) => failure(e),
                    },
                    None => Outcome { code, stdout: text, stderr: String::new() },
                },
                Err(e) => failure(e),
            }
        }
        Err(e) => failure(e),
    }
}

fn failure(e: CliError) -> Outcome {
    Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("tritile: {e}\n") }
}

/// Command-line position of the first region token, counted from 1 after the program name.
fn region_position(argv: &[String], subcommand: &str, tokens: &[String]) -> usize {
    let start = argv.iter().position(|a| a == subcommand).map_or(0, |i| i + 1);
    match tokens.first() {
        Some(first) => argv[start..].iter().position(|a| a == first).map_or(start, |i| start + i) + 1,
        None => start + 1,
    }
}

fn region_arg(argv: &[String], subcommand: &str, tokens: &[String]) -> Result<Arc<Region>, CliError> {
    args::parse_region(tokens, region_position(argv, subcommand, tokens))
}

fn optional_region(argv: &[String], subcommand: &str, tokens: &[String]) -> Result<Option<Arc<Region>>, CliError> {
    if tokens.is_empty() {
        Ok(None)
    } else {
        region_arg(argv, subcommand, tokens).map(Some)
    }
}

fn execute(cli: &Cli, argv: &[String]) -> Result<Report, CliError> {
    configure_threads()?;
    let command = command_line(argv);
    let seed = cli.seed;
    let report = match &cli.command {
        Command::Enumerate { region, count_only } => {
            let r = region_arg(argv, "enumerate", region)?;
            let (result, table) = commands::enumerate(&r, *count_only);
            Report::new(command, seed, result, table)
        }
        Command::Components { region, moves } => {
            let r = region_arg(argv, "components", region)?;
            let (result, table) = commands::components(&r, *moves)?;
            Report::new(command, seed, result, table)
        }
        Command::Invariants { region, tiling, base } => {
            let r = optional_region(argv, "invariants", region)?;
            let t = args::load_tiling(r.as_ref(), tiling.as_deref(), *base)?;
            let (result, table) = commands::invariants(&t)?;
            Report::new(command, seed, result, table)
        }
        Command::Refine { region, tiling, base, k, tiling_out } => {
            let r = optional_region(argv, "refine", region)?;
            let t = args::load_tiling(r.as_ref(), tiling.as_deref(), *base)?;
            let (result, table) = commands::refine(&t, *k, tiling_out.as_deref())?;
            Report::new(command, seed, result, table)
        }
        Command::Sample { region, moves, steps, start } => {
            let r = optional_region(argv, "sample", region)?;
            let start = match start {
                Some(path) => Some(args::load_tiling(r.as_ref(), Some(path), None)?),
                None => None,
            };
            let r = match (r, &start) {
                (Some(r), _) => r,
                (None, Some(t)) => t.region().clone(),
                (None, None) => return Err(CliError::MissingArgument("expected a region or --start FILE".into())),
            };
            let (result, table) = commands::sample(&r, start, *moves, *steps, seed)?;
            Report::new(command, seed, result, table)
        }
        Command::Verify { suite, region, tilings, samples } => {
            let opts = VerifyOptions {
                region: optional_region(argv, "verify", region)?,
                seed,
                tilings: *tilings,
                samples: *samples,
            };
            let (result, table) = verify::verify(*suite, &opts)?;
            let passed = result.passed;
            let mut report = Report::new(command, seed, result, table);
            report.success = passed;
            report
        }
    };
    Ok(report)
}

/// Apply `TRITILE_THREADS` to the global thread pool, once.
fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("TRITILE_THREADS") else {
        return Ok(());
    };
    let n: usize = value.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| CliError::Threads(value.clone()))?;
    // a second call in the same process finds the pool already built; that is fine
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}
