//! The three dive rules on one instance.
//!
//! `cargo run --example diving -- [instance.mps[.gz]]`
use std::path::PathBuf;

use poutine::deadline::Deadline;
use poutine::diving::{dive_with_trace, DiveRule, DEFAULT_MAX_DIVES};
use poutine::model::{ProblemInstance, Relation, Row, VarClass};
use poutine::mps::read_instance;

/// Three-row multi-knapsack over 14 binaries with a fractional relaxation.
fn knapsack() -> ProblemInstance {
    let n = 14;
    let mut inst = ProblemInstance::with_vars("mknap", 0);
    for j in 0..n {
        inst.add_var(format!("x{j}"), VarClass::Binary, 0.0, 1.0, -(((7 * j + 3) % 11) as f64 + 4.0));
    }
    for i in 0..3 {
        let coefs = (0..n).map(|j| (j, ((5 * i + 3 * j + i * j) % 9) as f64 + 2.0)).collect();
        inst.add_row(Row::new(format!("cap{i}"), coefs, Relation::Le, 23.0 + 4.0 * i as f64));
    }
    inst
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inst = match std::env::args().nth(1) {
        Some(path) => read_instance(PathBuf::from(path))?,
        None => knapsack(),
    };
    for rule in [DiveRule::Dive1, DiveRule::Dive2, DiveRule::Dive3 { seed: 100 }] {
        let out = dive_with_trace(&inst, rule, DEFAULT_MAX_DIVES, &Deadline::never());
        let objective = out.solution.as_ref().map(|s| s.objective);
        println!(
            "{rule:?}: objective {objective:?}, {} leaves, {} LP solves, depth {}",
            out.dives, out.lp_solves, out.max_depth
        );
    }
    Ok(())
}
