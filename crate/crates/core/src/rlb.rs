//! Repair of a near-feasible integer point by local branching on a slack
//! model.
//!
//! Every row the seed violates gets a continuous slack `s` and a binary flag
//! `y` with `|s| <= M * y`; the repair objective counts raised flags. Local
//! branching around the current repair point drives the count to zero, at
//! which point the original variables form a feasible solution.
use serde::{Deserialize, Serialize};

use crate::bnb::{local_branching_instance, solve_bnb, BnbBudget, BnbOptions};
use crate::deadline::Deadline;
use crate::error::{Error, Result};
use crate::model::{evaluate, ProblemInstance, Relation, Row, Solution, VarClass, FEAS_TOL};
use crate::rounding::complete_assignment;

pub const DEFAULT_RADIUS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RlbConfig {
    /// Local branching radius.
    pub k: usize,
    /// Node cap of each local branching sub-MIP.
    pub sub_node_cap: u64,
}

impl Default for RlbConfig {
    fn default() -> Self {
        RlbConfig {
            k: DEFAULT_RADIUS,
            sub_node_cap: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Artificial {
    pub row: usize,
    pub slack: usize,
    pub flag: usize,
    pub big_m: f64,
    /// Signed slack that makes the seed satisfy the row.
    pub seed_slack: f64,
}

#[derive(Debug, Clone)]
pub struct RepairModel {
    pub instance: ProblemInstance,
    pub artificials: Vec<Artificial>,
    pub original_vars: usize,
    /// The clamped seed with every flag raised and slacks at their seed values.
    pub start: Vec<f64>,
}

impl RepairModel {
    /// The first `original_vars` entries.
    pub fn project<'a>(&self, point: &'a [f64]) -> &'a [f64] {
        &point[..self.original_vars]
    }
}

/// Seed clamped into the variable bounds.
pub fn clamp_to_bounds(instance: &ProblemInstance, point: &[f64]) -> Vec<f64> {
    point
        .iter()
        .enumerate()
        .map(|(j, &v)| v.clamp(instance.lower[j], instance.upper[j]))
        .collect()
}

pub fn build_repair_model(instance: &ProblemInstance, x_hat: &[f64]) -> Result<RepairModel> {
    let n = instance.num_vars();
    if x_hat.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: x_hat.len(),
        });
    }
    let seed = clamp_to_bounds(instance, x_hat);
    let mut model = instance.clone();
    model.objective = vec![0.0; n];
    model.objective_constant = 0.0;
    let mut start = seed.clone();
    let mut artificials = Vec::new();
    for (i, row) in instance.rows.iter().enumerate() {
        let activity = row.activity(&seed);
        let violation = row.violation(activity);
        if violation <= FEAS_TOL {
            continue;
        }
        let big_m = (1.1 * violation).max(1.0);
        let (slack_lo, sign, seed_slack) = match row.relation {
            Relation::Le => (0.0, -1.0, violation),
            Relation::Ge => (0.0, 1.0, violation),
            Relation::Eq => (-big_m, -1.0, activity - row.rhs),
        };
        let slack = model.add_var(format!("repair_s_{}", row.name), VarClass::Continuous, slack_lo, big_m, 0.0);
        let flag = model.add_var(format!("repair_y_{}", row.name), VarClass::Binary, 0.0, 1.0, 1.0);
        model.rows[i].coefs.push((slack, sign));
        model.add_row(Row::new(
            format!("repair_link_{}", row.name),
            vec![(slack, 1.0), (flag, -big_m)],
            Relation::Le,
            0.0,
        ));
        if row.relation == Relation::Eq {
            model.add_row(Row::new(
                format!("repair_link_neg_{}", row.name),
                vec![(slack, -1.0), (flag, -big_m)],
                Relation::Le,
                0.0,
            ));
        }
        start.push(seed_slack);
        start.push(1.0);
        artificials.push(Artificial {
            row: i,
            slack,
            flag,
            big_m,
            seed_slack,
        });
    }
    Ok(RepairModel {
        instance: model,
        artificials,
        original_vars: n,
        start,
    })
}

/// Solution of the original instance from a repair point whose flags are all
/// down; re-solves continuous variables if the plain projection is off.
fn recover(instance: &ProblemInstance, model: &RepairModel, point: &[f64], deadline: &Deadline) -> Option<Solution> {
    let projected = model.project(point);
    match evaluate(instance, projected) {
        Ok(sol) if sol.is_feasible() => Some(sol),
        _ => complete_assignment(instance, projected, deadline),
    }
}

/// Repairs `seed_point`. Each round solves a local branching sub-MIP of
/// radius `k` around the current repair point asking for fewer raised flags.
/// After a round without progress the radius is doubled once; a second such
/// round ends the search.
pub fn run_rlb(instance: &ProblemInstance, seed_point: &[f64], config: &RlbConfig, deadline: &Deadline) -> Option<Solution> {
    let model = build_repair_model(instance, seed_point).ok()?;
    if model.artificials.is_empty() {
        return recover(instance, &model, &model.start, deadline);
    }
    let mut current = evaluate(&model.instance, &model.start).ok()?;
    let mut k = config.k;
    let mut widened = false;
    while !deadline.expired() {
        let sub = local_branching_instance(&model.instance, &current.values, k);
        let budget = BnbBudget {
            node_cap: Some(config.sub_node_cap),
            deadline: deadline.clone(),
            gap_tolerance: None,
        };
        let options = BnbOptions::plain().with_cutoff(current.objective - 0.5);
        let res = solve_bnb(&sub, None, &budget, &options, &mut ());
        let better = res
            .best
            .and_then(|s| evaluate(&model.instance, &s.values).ok())
            .filter(|s| s.is_feasible() && s.objective < current.objective - 0.5);
        match better {
            Some(point) => {
                current = point;
                if current.objective < 0.5 {
                    return recover(instance, &model, &current.values, deadline);
                }
            }
            None if !widened => {
                k *= 2;
                widened = true;
            }
            None => break,
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> ProblemInstance {
        let mut inst = ProblemInstance::with_vars("r", 0);
        inst.add_var("x1", VarClass::GeneralInteger, 0.0, 3.0, 1.0);
        inst.add_var("x2", VarClass::GeneralInteger, 0.0, 3.0, 1.0);
        inst.add_row(Row::new("c", vec![(0, 2.0), (1, 1.0)], Relation::Le, 3.0));
        inst
    }

    #[test]
    fn hand_model() {
        let m = build_repair_model(&toy(), &[1.0, 2.0]).unwrap();
        assert_eq!(m.artificials.len(), 1);
        let a = &m.artificials[0];
        assert_eq!((a.slack, a.flag, a.big_m), (2, 3, 1.1));
        assert_eq!(m.instance.rows[0].coefs, vec![(0, 2.0), (1, 1.0), (2, -1.0)]);
        assert_eq!(m.instance.rows[1].coefs, vec![(2, 1.0), (3, -1.1)]);
        assert_eq!(m.instance.objective, vec![0.0, 0.0, 0.0, 1.0]);
        assert_eq!(m.start, vec![1.0, 2.0, 1.0, 1.0]);
        assert!(evaluate(&m.instance, &m.start).unwrap().is_feasible());
    }

    #[test]
    fn feasible_seed_is_returned() {
        let m = build_repair_model(&toy(), &[1.0, 1.0]).unwrap();
        assert!(m.artificials.is_empty());
        let sol = run_rlb(&toy(), &[1.0, 1.0], &RlbConfig::default(), &Deadline::never()).unwrap();
        assert_eq!(sol.values, vec![1.0, 1.0]);
    }

    #[test]
    fn repairs_and_reports_original_objective() {
        let sol = run_rlb(&toy(), &[3.0, 3.0], &RlbConfig { k: 2, ..RlbConfig::default() }, &Deadline::never()).unwrap();
        assert!(sol.is_feasible());
        assert_eq!(sol.objective, sol.values.iter().sum::<f64>());
    }

    #[test]
    fn equality_rows_get_two_sided_slack() {
        let mut inst = toy();
        inst.rows[0].relation = Relation::Eq;
        let m = build_repair_model(&inst, &[0.0, 0.0]).unwrap();
        let a = &m.artificials[0];
        assert_eq!(a.seed_slack, -3.0);
        assert_eq!((m.instance.lower[a.slack], m.instance.upper[a.slack]), (-3.3000000000000003, 3.3000000000000003));
        assert_eq!(m.instance.num_rows(), 3);
        assert!(evaluate(&m.instance, &m.start).unwrap().is_feasible());
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(build_repair_model(&toy(), &[1.0]), Err(Error::Dimension { .. })));
    }
}
