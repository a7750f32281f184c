use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::Parser;
use poutine::error::{Error, Result};
use poutine::mps::read_instance;
use poutine::orchestrator::{default_portfolio, portfolio_from_json, run_poutine, RunOptions, RunStatus, WorkerConfig};
use poutine::sol::reported_objective;

const EXIT_FEASIBLE: u8 = 0;
const EXIT_NO_SOLUTION: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_INPUT_ERROR: u8 = 4;

/// Parallel primal-heuristic MILP solver.
#[derive(Debug, Parser)]
#[command(name = "poutine", version)]
struct Cli {
    /// Instance in MPS format, optionally gzip-compressed.
    instance: PathBuf,
    /// Wall-clock limit in seconds.
    #[arg(long, default_value_t = 600.0)]
    time_limit: f64,
    /// Number of worker threads for preset portfolios.
    #[arg(long, default_value_t = 8)]
    threads: usize,
    /// Added to every stage seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Solution file, rewritten on every improvement.
    #[arg(long)]
    output: PathBuf,
    /// Preset name (`default`) or a JSON portfolio file.
    #[arg(long)]
    portfolio: Option<String>,
    /// CSV event log.
    #[arg(long)]
    log: Option<PathBuf>,
}

fn portfolio(cli: &Cli) -> Result<Vec<WorkerConfig>> {
    match cli.portfolio.as_deref() {
        None | Some("default") => default_portfolio(cli.threads),
        Some(path) if path.ends_with(".json") => portfolio_from_json(&std::fs::read_to_string(path)?),
        Some(other) => Err(Error::InvalidConfig(format!("unknown portfolio preset `{other}`"))),
    }
}

fn run(cli: &Cli) -> Result<u8> {
    if !(cli.time_limit > 0.0 && cli.time_limit.is_finite()) {
        return Err(Error::InvalidConfig(format!("time limit {}", cli.time_limit)));
    }
    let instance = read_instance(&cli.instance)?;
    let workers = portfolio(cli)?;
    let (b, g, c) = instance.class_counts();
    println!(
        "instance {}: {} vars ({b} binary, {g} integer, {c} continuous), {} rows",
        instance.name,
        instance.num_vars(),
        instance.num_rows()
    );
    let options = RunOptions {
        seed: cli.seed,
        sol_path: Some(cli.output.clone()),
        log_path: cli.log.clone(),
    };
    let report = run_poutine(&instance, &workers, Duration::from_secs_f64(cli.time_limit), &options)?;
    for w in &report.workers {
        println!(
            "worker {} {}: found={} nodes={} status={:?}",
            w.id, w.description, w.found, w.bnb_nodes, w.bnb_status
        );
    }
    println!("status {:?} after {:.2}s", report.status, report.elapsed.as_secs_f64());
    Ok(match (report.status, &report.best) {
        (RunStatus::Infeasible, _) => EXIT_INFEASIBLE,
        (_, Some(best)) => {
            println!("objective {}", reported_objective(&instance, best.objective));
            EXIT_FEASIBLE
        }
        (_, None) => EXIT_NO_SOLUTION,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_INPUT_ERROR);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT_ERROR)
        }
    }
}
