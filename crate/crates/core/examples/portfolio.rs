//! Run the parallel portfolio on an instance with a short time limit.
//!
//! `cargo run --release --example portfolio -- [instance.mps[.gz]] [threads] [seconds]`
use std::path::PathBuf;
use std::time::Duration;

use poutine::mps::read_instance;
use poutine::orchestrator::{default_portfolio, run_poutine, RunOptions};
use poutine::sol::reported_objective;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/assign3.mps.gz"));
    let threads: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(4);
    let seconds: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(5.0);

    let inst = read_instance(&path)?;
    let portfolio = default_portfolio(threads)?;
    for w in &portfolio {
        println!("worker {}: {}", w.id, w.describe());
    }
    let report = run_poutine(&inst, &portfolio, Duration::from_secs_f64(seconds), &RunOptions::default())?;
    for imp in &report.improvements {
        println!("{:>8.3}s worker {} -> {}", imp.elapsed.as_secs_f64(), imp.worker, reported_objective(&inst, imp.objective));
    }
    println!("{:?}, bound {}, {:.2}s", report.status, report.best_bound, report.elapsed.as_secs_f64());
    Ok(())
}
