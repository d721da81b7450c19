//! Command-line front end for the bandit benchmark.
//!
//! Four subcommands cover the full workflow:
//!
//! * `run`    — run every agent in a JSON config on one (N, d) configuration
//!              and write `summary.csv` plus `trajectory.csv`.
//! * `sweep`  — run the canonical eight-agent roster over the benchmark grid
//!              (N in {10, 15, 20} x d in {5, 10, 15}) and write `summary.csv`.
//! * `memory` — write the model-size table (`memory.csv`) for the standard
//!              roster at N = 10, D = 1024 over d in {8, 16, 32, 64, 128}.
//! * `plot`   — render one of the emitted CSV files as a self-contained SVG.
//!
//! Exit codes: 0 on success, 1 for usage or configuration errors (bad flags,
//! unreadable or invalid config, malformed `HDBANDIT_SEED`, unusable plot
//! input), 2 for runtime failures (filesystem errors while writing outputs).
//!
//! The seed is resolved in precedence order: `--seed` flag, then the
//! `HDBANDIT_SEED` environment variable (a decimal 64-bit unsigned integer),
//! then the config file's `seed` field. The output directory resolves as
//! `--out`, then the config's `output_dir`, then `./out`. All output files
//! are written only after the computation has finished.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use hdbandit_core::harness::{self, ExperimentConfig, SweepCell};
use hdbandit_core::report;

mod plot;

#[derive(Parser)]
#[command(
    name = "hdbandit",
    version,
    about = "Contextual-bandit benchmark on hyperdimensional representations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Print progress to stderr while computing.
    #[arg(short, long, global = true)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured agents on a single (N, d) configuration.
    Run(RunArgs),
    /// Run the canonical roster over the full benchmark grid.
    ///
    /// The roster is fixed (lineps, hdcb_real, hdcb_bin Q in {2,3,4},
    /// hdcb_prob kappa in {1,3,7}); the config's `agents` list only applies
    /// to `run`. Per-cell epsilon is tuned over the default grid.
    Sweep(RunArgs),
    /// Write the model-size table as memory.csv.
    Memory(MemoryArgs),
    /// Render an emitted CSV file (trajectory or memory table) as an SVG.
    Plot(PlotArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Path to the JSON experiment config.
    #[arg(short, long)]
    config: PathBuf,

    /// Output directory (overrides the config's output_dir; default "out").
    #[arg(short, long)]
    out: Option<PathBuf>,

    /// Base seed override (beats HDBANDIT_SEED and the config's seed).
    #[arg(short, long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct MemoryArgs {
    /// Output directory (default "out").
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PlotArgs {
    /// CSV file to render (a summary trajectory or the memory table).
    #[arg(short, long)]
    input: PathBuf,

    /// Output SVG path (default: the input path with an .svg extension).
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

/// Errors split by exit code: bad input is the caller's fault (exit 1),
/// runtime failures are the environment's (exit 2).
enum CliError {
    Input(String),
    Runtime(String),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err)
            if err.kind() == ErrorKind::DisplayHelp || err.kind() == ErrorKind::DisplayVersion =>
        {
            print!("{err}");
            return ExitCode::SUCCESS;
        }
        Err(err) => {
            eprint!("{err}");
            return ExitCode::from(1);
        }
    };

    let result = match &cli.command {
        Command::Run(args) => cmd_run(args, cli.verbose),
        Command::Sweep(args) => cmd_sweep(args, cli.verbose),
        Command::Memory(args) => cmd_memory(args),
        Command::Plot(args) => cmd_plot(args),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn cmd_run(args: &RunArgs, verbose: bool) -> Result<(), CliError> {
    let mut config = load_config(&args.config)?;
    apply_seed_override(&mut config, args.seed)?;
    let out_dir = resolve_out_dir(args.out.as_deref(), config.output_dir.as_deref());

    let mut cells = Vec::with_capacity(config.agents.len());
    for spec in &config.agents {
        if verbose {
            eprintln!(
                "running {} (N={}, d={})",
                spec.label(),
                config.num_actions,
                config.context_dim
            );
        }
        let summary = harness::run_experiment(&config, spec).map_err(input_error)?;
        cells.push(SweepCell {
            spec: spec.clone(),
            num_actions: config.num_actions,
            context_dim: config.context_dim,
            hv_dim: config.hv_dim,
            summary,
        });
    }

    let summary = report::summary_csv(&cells);
    let trajectory = report::trajectory_csv(&cells);
    write_outputs(
        &out_dir,
        &[("summary.csv", &summary), ("trajectory.csv", &trajectory)],
    )
}

fn cmd_sweep(args: &RunArgs, verbose: bool) -> Result<(), CliError> {
    let mut config = load_config(&args.config)?;
    apply_seed_override(&mut config, args.seed)?;
    let out_dir = resolve_out_dir(args.out.as_deref(), config.output_dir.as_deref());

    let plan = harness::sweep_plan(&harness::canonical_roster());
    let mut cells = Vec::with_capacity(plan.len());
    for (i, (num_actions, context_dim, spec)) in plan.iter().enumerate() {
        if verbose {
            eprintln!(
                "[{}/{}] N={num_actions} d={context_dim} {}",
                i + 1,
                plan.len(),
                spec.label()
            );
        }
        let cell = harness::run_sweep_cell(&config, *num_actions, *context_dim, spec)
            .map_err(input_error)?;
        cells.push(cell);
    }

    let summary = report::summary_csv(&cells);
    write_outputs(&out_dir, &[("summary.csv", &summary)])
}

fn cmd_memory(args: &MemoryArgs) -> Result<(), CliError> {
    let out_dir = resolve_out_dir(args.out.as_deref(), None);
    let rows = harness::memory_table(10, &harness::MEMORY_DIMS, 1024);
    let csv = report::memory_csv(&rows);
    write_outputs(&out_dir, &[("memory.csv", &csv)])
}

fn cmd_plot(args: &PlotArgs) -> Result<(), CliError> {
    let content = std::fs::read_to_string(&args.input)
        .map_err(|err| CliError::Input(format!("cannot read {}: {err}", args.input.display())))?;
    let svg = plot::svg_from_csv(&args.input.display().to_string(), &content)
        .map_err(|err| CliError::Input(err.to_string()))?;

    let output = args
        .output
        .clone()
        .unwrap_or_else(|| args.input.with_extension("svg"));
    if let Some(parent) = output.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|err| {
            CliError::Runtime(format!("cannot create {}: {err}", parent.display()))
        })?;
    }
    std::fs::write(&output, svg)
        .map_err(|err| CliError::Runtime(format!("cannot write {}: {err}", output.display())))
}

/// Reads and validates the JSON experiment config at `path`.
fn load_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|err| CliError::Input(format!("cannot read config {}: {err}", path.display())))?;
    let config = ExperimentConfig::from_json_str(&text)
        .map_err(|err| CliError::Input(format!("invalid config {}: {err}", path.display())))?;
    Ok(config)
}

/// Applies the seed precedence: `--seed` flag, then HDBANDIT_SEED, then the
/// config value already in place.
fn apply_seed_override(config: &mut ExperimentConfig, flag: Option<u64>) -> Result<(), CliError> {
    if let Some(seed) = flag {
        config.seed = seed;
        return Ok(());
    }
    match std::env::var("HDBANDIT_SEED") {
        Ok(text) => {
            let seed = text.trim().parse::<u64>().map_err(|_| {
                CliError::Input(format!(
                    "HDBANDIT_SEED must be a decimal 64-bit unsigned integer, got {text:?}"
                ))
            })?;
            config.seed = seed;
            Ok(())
        }
        Err(std::env::VarError::NotPresent) => Ok(()),
        Err(err) => Err(CliError::Input(format!(
            "HDBANDIT_SEED is unreadable: {err}"
        ))),
    }
}

fn resolve_out_dir(flag: Option<&Path>, config_dir: Option<&Path>) -> PathBuf {
    flag.or(config_dir)
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("out"))
}

/// Creates `dir` and writes every (name, content) pair into it. Called only
/// after all computation has succeeded, so a failed run leaves no partial
/// output behind.
fn write_outputs(dir: &Path, files: &[(&str, &str)]) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|err| CliError::Runtime(format!("cannot create {}: {err}", dir.display())))?;
    for (name, content) in files {
        let path = dir.join(name);
        std::fs::write(&path, content)
            .map_err(|err| CliError::Runtime(format!("cannot write {}: {err}", path.display())))?;
    }
    Ok(())
}

fn input_error(err: harness::HarnessError) -> CliError {
    CliError::Input(err.to_string())
}
