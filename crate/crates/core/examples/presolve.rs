//! Presolve an instance and map a reduced solution back.
use poutine::bnb::{solve_bnb, BnbBudget, BnbOptions};
use poutine::model::{ProblemInstance, Relation, Row, VarClass};
use poutine::presolve::{presolve, uncrush};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut inst = ProblemInstance::with_vars("demo", 0);
    inst.add_var("a", VarClass::Binary, 0.0, 1.0, -3.0);
    inst.add_var("b", VarClass::GeneralInteger, 2.0, 2.0, 1.0);
    inst.add_var("c", VarClass::GeneralInteger, 0.0, 10.0, -1.0);
    inst.add_var("d", VarClass::Continuous, 0.0, 5.0, 0.5);
    inst.add_row(Row::new("cap", vec![(0, 2.0), (1, 1.0), (2, 1.0), (3, 1.0)], Relation::Le, 9.0));
    inst.add_row(Row::new("single", vec![(2, 2.0)], Relation::Le, 7.0));
    inst.add_row(Row::new("floor", vec![(3, 1.0)], Relation::Ge, 0.5));

    let (reduced, record) = presolve(&inst)?;
    println!(
        "{}x{} -> {}x{}, objective constant {}",
        inst.num_vars(),
        inst.num_rows(),
        reduced.num_vars(),
        reduced.num_rows(),
        reduced.objective_constant
    );
    for r in &record.reductions {
        println!("  {r:?}");
    }
    let res = solve_bnb(&reduced, None, &BnbBudget::unlimited(), &BnbOptions::default(), &mut ());
    let best = res.best.ok_or("no solution")?;
    let full = uncrush(&best, &record, &inst)?;
    println!("reduced optimum {} -> original {:?} objective {}", best.objective, full.values, full.objective);
    Ok(())
}
