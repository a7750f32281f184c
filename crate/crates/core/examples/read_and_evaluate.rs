//! Parse an MPS file and evaluate the all-lower-bounds point.
//!
//! `cargo run --example read_and_evaluate -- [instance.mps[.gz]]`
use std::path::PathBuf;

use poutine::model::evaluate;
use poutine::mps::read_instance;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/mixed.mps"));
    let inst = read_instance(&path)?;
    let (b, g, c) = inst.class_counts();
    println!("{}: {} vars ({b} B, {g} G, {c} C), {} rows", inst.name, inst.num_vars(), inst.num_rows());
    for (j, name) in inst.var_names.iter().enumerate() {
        println!("  {name:<8} {:?} [{}, {}] cost {}", inst.var_class[j], inst.lower[j], inst.upper[j], inst.objective[j]);
    }
    let point: Vec<f64> = inst.lower.iter().map(|l| if l.is_finite() { *l } else { 0.0 }).collect();
    let sol = evaluate(&inst, &point)?;
    println!("lower-bound point: objective {} max violation {}", sol.objective, sol.max_violation);
    Ok(())
}
