//! Turning near-integral points into checked solutions.
use crate::deadline::Deadline;
use crate::lp::{LpOptions, LpStatus, Simplex};
use crate::model::{evaluate, fractionality, ProblemInstance, Solution, VarClass, FEAS_TOL, INT_TOL};

/// Round half up: `0.5 -> 1`, `-0.5 -> 0`.
pub fn round_half_up(x: f64) -> f64 {
    (x + 0.5).floor()
}

/// Rounds the integer entries of `point` half up; continuous entries are kept.
pub fn round_point(point: &[f64], classes: &[VarClass]) -> Vec<f64> {
    point
        .iter()
        .zip(classes)
        .map(|(&x, c)| if c.is_integer() { round_half_up(x) } else { x })
        .collect()
}

/// Whether every integer entry is within [`INT_TOL`] of an integer.
pub fn is_near_integral(point: &[f64], classes: &[VarClass]) -> bool {
    point
        .iter()
        .zip(classes)
        .all(|(&x, c)| !c.is_integer() || fractionality(x) <= INT_TOL)
}

/// Keeps the integer entries of `values` and re-optimizes the continuous ones
/// with the original objective. `None` if the result is not feasible.
pub fn complete_assignment(instance: &ProblemInstance, values: &[f64], deadline: &Deadline) -> Option<Solution> {
    let n = instance.num_vars();
    let mut lower = instance.lower.clone();
    let mut upper = instance.upper.clone();
    for j in 0..n {
        if instance.is_integer(j) {
            let v = values[j].round();
            if v < instance.lower[j] - FEAS_TOL || v > instance.upper[j] + FEAS_TOL {
                return None;
            }
            lower[j] = v;
            upper[j] = v;
        }
    }
    let mut point = if instance.var_class.iter().all(|c| c.is_integer()) {
        lower
    } else {
        let opts = LpOptions {
            deadline: deadline.clone(),
            ..LpOptions::default()
        };
        let res = Simplex::new(instance, None).solve(&lower, &upper, None, &opts);
        if res.status != LpStatus::Optimal {
            return None;
        }
        res.point
    };
    for j in 0..n {
        if instance.is_integer(j) {
            point[j] = values[j].round();
        }
    }
    evaluate(instance, &point).ok().filter(Solution::is_feasible)
}

/// A checked solution from an LP point whose integer entries are integral up
/// to tolerance: snap them, and if snapping breaks a row, re-solve the
/// continuous part.
pub fn integral_solution(instance: &ProblemInstance, point: &[f64], deadline: &Deadline) -> Option<Solution> {
    let snapped: Vec<f64> = point
        .iter()
        .zip(&instance.var_class)
        .map(|(&x, c)| if c.is_integer() { x.round() } else { x })
        .collect();
    match evaluate(instance, &snapped) {
        Ok(sol) if sol.is_feasible() => Some(sol),
        _ if instance.var_class.iter().any(|c| !c.is_integer()) => complete_assignment(instance, &snapped, deadline),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Relation, Row};

    #[test]
    fn half_up_rounding() {
        let classes = [VarClass::GeneralInteger; 3];
        assert_eq!(round_point(&[0.5, 0.49, 2.7], &classes), vec![1.0, 0.0, 3.0]);
        assert_eq!(round_point(&[-0.5], &classes[..1]), vec![0.0]);
        assert_eq!(round_point(&[1.0, -2.0, 0.0], &classes), vec![1.0, -2.0, 0.0]);
        let mixed = [VarClass::Binary, VarClass::Continuous];
        assert_eq!(round_point(&[0.7, 0.7], &mixed), vec![1.0, 0.7]);
    }

    #[test]
    fn completion_reoptimizes_continuous_part() {
        let mut inst = ProblemInstance::with_vars("c", 0);
        inst.add_var("b", VarClass::Binary, 0.0, 1.0, 1.0);
        inst.add_var("y", VarClass::Continuous, 0.0, 10.0, 1.0);
        inst.add_row(Row::new("r", vec![(0, 2.0), (1, 1.0)], Relation::Ge, 3.0));
        let sol = complete_assignment(&inst, &[1.0, 7.0], &Deadline::never()).unwrap();
        assert_eq!(sol.values, vec![1.0, 1.0]);
        assert_eq!(sol.objective, 2.0);
        let mut steep = inst.clone();
        steep.rows[0] = Row::new("r", vec![(0, 10.0), (1, 1.0)], Relation::Ge, 11.0);
        // Snapping b leaves the row short by 9e-6; the LP re-solve repairs y.
        let near = integral_solution(&steep, &[1.0000009, 0.999991], &Deadline::never()).unwrap();
        assert_eq!(near.values, vec![1.0, 1.0]);
        assert!(complete_assignment(&inst, &[2.0, 0.0], &Deadline::never()).is_none());
    }
}
