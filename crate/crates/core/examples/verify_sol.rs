//! Check a `.sol` file against its instance.
//!
//! `cargo run --example verify_sol -- instance.mps solution.sol`
use poutine::model::evaluate;
use poutine::mps::read_instance;
use poutine::sol::{read_sol_file, reported_objective};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let [instance, solution] = args.as_slice() else {
        return Err("usage: verify_sol <instance> <solution.sol>".into());
    };
    let inst = read_instance(instance)?;
    let sol = read_sol_file(solution, &inst)?;
    let eval = evaluate(&inst, &sol.values)?;
    let recomputed = reported_objective(&inst, eval.objective);
    println!("max violation {:e}", eval.max_violation);
    println!("objective {recomputed} (file says {:?})", sol.objective);
    if !eval.is_feasible() {
        std::process::exit(1);
    }
    Ok(())
}
