//! Breadth-first branch-and-bound with incumbent and bound reporting.
//!
//! `cargo run --example branch_and_bound -- [instance.mps[.gz]]`
use std::path::PathBuf;

use poutine::bnb::{solve_bnb, BnbBudget, BnbOptions, IncumbentSink};
use poutine::model::Solution;
use poutine::mps::read_instance;
use poutine::sol::reported_objective;

struct Printer;

impl IncumbentSink for Printer {
    fn improved(&mut self, solution: &Solution) {
        println!("  incumbent {}", solution.objective);
    }

    fn wants_progress(&self) -> bool {
        true
    }

    fn progress(&mut self, lower_bound: f64, incumbent: Option<f64>) {
        println!("  bound {lower_bound:.4} incumbent {incumbent:?}");
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/knapsack.mps"));
    let inst = read_instance(&path)?;
    let res = solve_bnb(&inst, None, &BnbBudget::nodes(10_000), &BnbOptions::default(), &mut Printer);
    println!("{:?} after {} nodes", res.status, res.nodes);
    if let Some(best) = res.best {
        println!("objective {} at {:?}", reported_objective(&inst, best.objective), best.values);
    }
    Ok(())
}
