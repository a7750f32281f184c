//! Solve an LP relaxation cold, then re-solve warm after a bound change.
use poutine::lp::{solve_lp, LpRelaxation};
use poutine::model::{ProblemInstance, Relation, Row, VarClass};

fn main() {
    let mut inst = ProblemInstance::with_vars("lp", 0);
    inst.add_var("x", VarClass::Continuous, 0.0, 4.0, -3.0);
    inst.add_var("y", VarClass::Continuous, 0.0, f64::INFINITY, -2.0);
    inst.add_row(Row::new("r1", vec![(0, 1.0), (1, 1.0)], Relation::Le, 4.0));
    inst.add_row(Row::new("r2", vec![(0, 1.0), (1, 3.0)], Relation::Le, 6.0));
    inst.add_row(Row::new("r3", vec![(0, 1.0), (1, -1.0)], Relation::Ge, -1.0));

    let mut relax = LpRelaxation::new(&inst);
    let cold = solve_lp(&relax, None, 1000);
    println!("cold: {:?} {:?} objective {} in {} pivots", cold.status, cold.point, cold.objective, cold.iterations);

    relax.bound_overrides.insert(0, (0.0, 2.0));
    let warm = solve_lp(&relax, cold.basis.as_ref(), 1000);
    println!("x <= 2, warm: {:?} {:?} objective {} in {} pivots", warm.status, warm.point, warm.objective, warm.iterations);
}
