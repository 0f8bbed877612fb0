use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use gaudin_core::harness::{run_batch, Command, InstanceConfig, RunReport};

/// Bethe algebra, Bethe ansatz and Wronskian checks for the twisted gl_N Gaudin model.
#[derive(Parser)]
#[command(name = "gaudin", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Diagonalize the Bethe algebra and recover a quasi-exponential kernel per character.
    Spectrum(RunArgs),
    /// Solve the Bethe ansatz equations and match Bethe vectors to characters.
    Bae(RunArgs),
    /// Analyse the quasi-exponential space given in the config.
    Wronski(RunArgs),
    /// Run every stage plus the counting checks.
    Verify(RunArgs),
    /// Print a stored report.
    Report {
        /// Report JSON written by one of the other subcommands.
        path: PathBuf,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Instance config: one JSON object, or an array of them.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the seed of every instance.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol_residual: Option<f64>,
    #[arg(long)]
    tol_cluster: Option<f64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct Output {
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Machine-readable JSON (the default).
    #[arg(long, conflicts_with = "table")]
    json: bool,
    /// Human-readable summary.
    #[arg(long)]
    table: bool,
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Returns whether every check passed.
fn execute(cli: Cli) -> Result<bool> {
    let (command, args) = match cli.command {
        Cmd::Spectrum(a) => (Command::Spectrum, a),
        Cmd::Bae(a) => (Command::Bae, a),
        Cmd::Wronski(a) => (Command::Wronski, a),
        Cmd::Verify(a) => (Command::Verify, a),
        Cmd::Report { path, output } => {
            let text = read(&path)?;
            let reports = parse_reports(&text).with_context(|| format!("{} is not a report", path.display()))?;
            emit(&reports, &output)?;
            return Ok(reports.iter().all(|r| !r.failed()));
        }
    };
    let text = read(&args.config)?;
    let mut configs = InstanceConfig::batch_from_json(&text)
        .with_context(|| format!("invalid config {}", args.config.display()))?;
    for cfg in &mut configs {
        let o = &mut cfg.options;
        o.seed = args.seed.unwrap_or(o.seed);
        o.tol_residual = args.tol_residual.unwrap_or(o.tol_residual);
        o.tol_cluster = args.tol_cluster.unwrap_or(o.tol_cluster);
    }
    let reports = run_batch(command, &configs)
        .into_iter()
        .enumerate()
        .map(|(i, r)| r.with_context(|| format!("instance {i}")))
        .collect::<Result<Vec<_>>>()?;
    emit(&reports, &args.output)?;
    Ok(reports.iter().all(|r| !r.failed()))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn parse_reports(text: &str) -> Result<Vec<RunReport>> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    Ok(match value {
        serde_json::Value::Array(items) => {
            items.into_iter().map(serde_json::from_value).collect::<Result<_, _>>()?
        }
        single => vec![serde_json::from_value(single)?],
    })
}

fn emit(reports: &[RunReport], output: &Output) -> Result<()> {
    let mut text = if output.table {
        reports.iter().map(RunReport::to_table).collect::<Vec<_>>().join("\n")
    } else if let [single] = reports {
        single.to_json()
    } else {
        serde_json::to_string_pretty(reports)?
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &output.out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
