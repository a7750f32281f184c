//! Repair an infeasible integer point with slack flags and local branching.
use poutine::deadline::Deadline;
use poutine::model::{evaluate, ProblemInstance, Relation, Row, VarClass};
use poutine::rlb::{build_repair_model, run_rlb, RlbConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut inst = ProblemInstance::with_vars("cover", 0);
    for j in 0..6 {
        inst.add_var(format!("x{j}"), VarClass::Binary, 0.0, 1.0, 1.0 + j as f64);
    }
    let sets: [&[usize]; 4] = [&[0, 1], &[1, 2, 3], &[3, 4], &[4, 5, 0]];
    for (i, set) in sets.iter().enumerate() {
        inst.add_row(Row::new(format!("cover{i}"), set.iter().map(|&j| (j, 1.0)).collect(), Relation::Ge, 1.0));
    }
    inst.add_row(Row::new("budget", (0..6).map(|j| (j, 1.0)).collect(), Relation::Le, 3.0));

    let seed = vec![0.0, 0.0, 1.0, 0.0, 0.0, 0.0];
    println!("seed violation {}", evaluate(&inst, &seed)?.max_violation);
    let model = build_repair_model(&inst, &seed)?;
    for a in &model.artificials {
        println!("  row {} gets slack/flag {}/{} with M = {}", inst.rows[a.row].name, a.slack, a.flag, a.big_m);
    }
    match run_rlb(&inst, &seed, &RlbConfig { k: 2, ..RlbConfig::default() }, &Deadline::never()) {
        Some(sol) => println!("repaired: {:?} objective {}", sol.values, sol.objective),
        None => println!("no repair found"),
    }
    Ok(())
}
