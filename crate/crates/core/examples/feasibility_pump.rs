//! Feasibility pump with a per-iteration trace.
use poutine::deadline::Deadline;
use poutine::fpump::{run_fp_traced, FpConfig, FpOutcome};
use poutine::model::{ProblemInstance, Relation, Row, VarClass};

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

fn main() {
    let inst = knapsack();
    for alpha in [0.0, 0.4, 0.9] {
        let config = FpConfig { alpha, iterations: 50, ..FpConfig::default() };
        let mut trace = Vec::new();
        let out = run_fp_traced(&inst, &config, &Deadline::never(), &mut trace);
        let distances: Vec<String> = trace
            .iter()
            .map(|s| format!("{:.2}{}", s.distance, if s.perturbed { "*" } else { "" }))
            .collect();
        match out {
            FpOutcome::Feasible(sol) => println!("alpha {alpha}: objective {} after [{}]", sol.objective, distances.join(" ")),
            FpOutcome::Exhausted { .. } => println!("alpha {alpha}: exhausted [{}]", distances.join(" ")),
            FpOutcome::NoPoint => println!("alpha {alpha}: relaxation infeasible"),
        }
    }
}
