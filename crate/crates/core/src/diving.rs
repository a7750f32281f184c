//! Depth-first diving with backtracking.
//!
//! Each step bounds one fractional integer variable toward its nearest
//! integer and re-solves the relaxation from the previous basis. An
//! infeasible relaxation pops the bound stack back to the nearest frame whose
//! other branch is still open.
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::deadline::Deadline;
use crate::lp::{Basis, LpOptions, LpStatus, Simplex};
use crate::model::{fractionality, ProblemInstance, Solution, VarClass, INT_TOL};
use crate::rounding::{integral_solution, round_point};

pub const DEFAULT_MAX_DIVES: u64 = (1 << 31) - 1;

/// Variable selection rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DiveRule {
    /// Smallest fractionality first.
    Dive1,
    /// Largest fractionality first.
    Dive2,
    /// Uniformly random fractional variable.
    Dive3 { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Down,
    Up,
}

impl Direction {
    fn flip(self) -> Self {
        match self {
            Direction::Down => Direction::Up,
            Direction::Up => Direction::Down,
        }
    }
}

/// Picks the branching variable for `rule` among integer entries of `point`
/// with fractionality above [`INT_TOL`]; `None` when there are none.
pub fn select_variable(
    point: &[f64],
    classes: &[VarClass],
    rule: DiveRule,
    rng: &mut ChaCha8Rng,
) -> Option<(usize, Direction)> {
    let candidates: Vec<(usize, f64)> = point
        .iter()
        .zip(classes)
        .enumerate()
        .filter(|(_, (_, c))| c.is_integer())
        .map(|(j, (&x, _))| (j, fractionality(x)))
        .filter(|&(_, f)| f > INT_TOL)
        .collect();
    let (first, rest) = candidates.split_first()?;
    let j = match rule {
        DiveRule::Dive1 => rest.iter().fold(*first, |best, &c| if c.1 < best.1 { c } else { best }).0,
        DiveRule::Dive2 => rest.iter().fold(*first, |best, &c| if c.1 > best.1 { c } else { best }).0,
        DiveRule::Dive3 { .. } => candidates[rng.gen_range(0..candidates.len())].0,
    };
    let x = point[j];
    let direction = if x - x.floor() > 0.5 { Direction::Up } else { Direction::Down };
    Some((j, direction))
}

fn rng_for(rule: DiveRule) -> ChaCha8Rng {
    match rule {
        DiveRule::Dive3 { seed } => ChaCha8Rng::seed_from_u64(seed),
        _ => ChaCha8Rng::seed_from_u64(0),
    }
}

#[derive(Debug, Clone)]
struct Frame {
    var: usize,
    direction: Direction,
    other_open: bool,
    /// LP value of the variable when the frame was created.
    value: f64,
    saved: (f64, f64),
    basis: Option<Basis>,
}

/// Bound stack of a dive.
#[derive(Debug, Clone, Default)]
pub struct DiveState {
    frames: Vec<Frame>,
}

impl DiveState {
    pub fn depth(&self) -> usize {
        self.frames.len()
    }

    fn apply(frame: &Frame, lower: &mut [f64], upper: &mut [f64]) {
        let j = frame.var;
        match frame.direction {
            Direction::Down => upper[j] = frame.value.floor(),
            Direction::Up => lower[j] = frame.value.ceil(),
        }
    }

    fn push(&mut self, frame: Frame, lower: &mut [f64], upper: &mut [f64]) {
        Self::apply(&frame, lower, upper);
        self.frames.push(frame);
    }

    /// Undoes frames until one has an open branch, switches it, and returns
    /// its basis. `None` when the stack is exhausted.
    fn backtrack(&mut self, lower: &mut [f64], upper: &mut [f64]) -> Option<Option<Basis>> {
        while let Some(frame) = self.frames.last_mut() {
            let j = frame.var;
            (lower[j], upper[j]) = frame.saved;
            if frame.other_open {
                frame.other_open = false;
                frame.direction = frame.direction.flip();
                Self::apply(frame, lower, upper);
                return Some(frame.basis.clone());
            }
            self.frames.pop();
        }
        None
    }
}

/// Result of a dive plus bookkeeping for callers that reuse its work.
#[derive(Debug, Clone, Default)]
pub struct DiveOutcome {
    pub solution: Option<Solution>,
    /// Rounding of the deepest LP point reached, a seed for repair.
    pub seed_point: Option<Vec<f64>>,
    pub dives: u64,
    pub lp_solves: u64,
    pub max_depth: usize,
}

/// Dives until the first feasible leaf, `max_dives` failed leaves, stack
/// exhaustion or the deadline.
pub fn dive(instance: &ProblemInstance, rule: DiveRule, max_dives: u64, deadline: &Deadline) -> Option<Solution> {
    dive_with_trace(instance, rule, max_dives, deadline).solution
}

pub fn dive_with_trace(instance: &ProblemInstance, rule: DiveRule, max_dives: u64, deadline: &Deadline) -> DiveOutcome {
    let mut out = DiveOutcome::default();
    let mut rng = rng_for(rule);
    let mut simplex = Simplex::new(instance, None);
    let opts = LpOptions {
        deadline: deadline.clone(),
        ..LpOptions::default()
    };
    let mut lower = instance.lower.clone();
    let mut upper = instance.upper.clone();
    let mut state = DiveState::default();
    let mut deepest: Option<(usize, Vec<f64>)> = None;

    let mut lp = simplex.solve(&lower, &upper, None, &opts);
    out.lp_solves += 1;
    if lp.status != LpStatus::Optimal {
        return out;
    }
    loop {
        if deadline.expired() {
            break;
        }
        let mut leaf = lp.status != LpStatus::Optimal;
        if !leaf {
            if deepest.as_ref().is_none_or(|(d, _)| state.depth() >= *d) {
                deepest = Some((state.depth(), lp.point.clone()));
            }
            match select_variable(&lp.point, &instance.var_class, rule, &mut rng) {
                Some((var, direction)) => {
                    let frame = Frame {
                        var,
                        direction,
                        other_open: true,
                        value: lp.point[var],
                        saved: (lower[var], upper[var]),
                        basis: lp.basis.take(),
                    };
                    let warm = frame.basis.clone();
                    state.push(frame, &mut lower, &mut upper);
                    out.max_depth = out.max_depth.max(state.depth());
                    lp = simplex.solve(&lower, &upper, warm.as_ref(), &opts);
                    out.lp_solves += 1;
                    continue;
                }
                None => match integral_solution(instance, &lp.point, deadline) {
                    Some(sol) => {
                        out.dives += 1;
                        out.solution = Some(sol);
                        break;
                    }
                    None => leaf = true,
                },
            }
        }
        debug_assert!(leaf);
        out.dives += 1;
        if out.dives >= max_dives.max(1) {
            break;
        }
        match state.backtrack(&mut lower, &mut upper) {
            Some(warm) => {
                lp = simplex.solve(&lower, &upper, warm.as_ref(), &opts);
                out.lp_solves += 1;
            }
            None => break,
        }
    }
    out.seed_point = deepest.map(|(_, p)| round_point(&p, &instance.var_class));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Relation, Row};

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(0)
    }

    #[test]
    fn selection_rules() {
        let classes = [VarClass::Binary; 3];
        let point = [0.2, 0.5, 0.49];
        assert_eq!(
            select_variable(&point, &classes, DiveRule::Dive1, &mut rng()),
            Some((0, Direction::Down))
        );
        assert_eq!(
            select_variable(&point, &classes, DiveRule::Dive2, &mut rng()),
            Some((1, Direction::Down))
        );
        assert_eq!(select_variable(&[1.0, 0.0, 1.0], &classes, DiveRule::Dive1, &mut rng()), None);
        let cont = [VarClass::Continuous, VarClass::GeneralInteger];
        assert_eq!(
            select_variable(&[0.5, 7.8], &cont, DiveRule::Dive2, &mut rng()),
            Some((1, Direction::Up))
        );
    }

    #[test]
    fn index_ties_go_to_smallest() {
        let classes = [VarClass::Binary; 3];
        let point = [0.25, 0.75, 0.25];
        assert_eq!(select_variable(&point, &classes, DiveRule::Dive1, &mut rng()).unwrap().0, 0);
        assert_eq!(select_variable(&point, &classes, DiveRule::Dive2, &mut rng()).unwrap().0, 0);
    }

    #[test]
    fn dive3_is_seeded() {
        let classes = [VarClass::Binary; 3];
        let point = [0.2, 0.5, 0.49];
        let rule = DiveRule::Dive3 { seed: 100 };
        let picks = |rule| {
            let mut r = rng_for(rule);
            (0..16)
                .map(|_| select_variable(&point, &classes, rule, &mut r).unwrap().0)
                .collect::<Vec<_>>()
        };
        assert_eq!(picks(rule), picks(rule));
        // Recorded once from the seeded stream.
        assert_eq!(picks(rule)[..4], [1, 2, 2, 0]);
    }

    #[test]
    fn integral_root_needs_no_bounds() {
        let mut inst = ProblemInstance::with_vars("i", 0);
        inst.add_var("x", VarClass::Binary, 0.0, 1.0, -1.0);
        let out = dive_with_trace(&inst, DiveRule::Dive1, DEFAULT_MAX_DIVES, &Deadline::never());
        assert_eq!(out.solution.unwrap().values, vec![1.0]);
        assert_eq!((out.max_depth, out.lp_solves), (0, 1));
    }

    #[test]
    fn hand_trace() {
        let mut inst = ProblemInstance::with_vars("h", 0);
        inst.add_var("x", VarClass::Binary, 0.0, 1.0, -1.0);
        inst.add_var("y", VarClass::Binary, 0.0, 1.0, -1.0);
        inst.add_row(Row::new("c", vec![(0, 1.0), (1, 1.0)], Relation::Le, 1.5));
        let out = dive_with_trace(&inst, DiveRule::Dive1, DEFAULT_MAX_DIVES, &Deadline::never());
        let sol = out.solution.unwrap();
        assert_eq!(sol.objective, -1.0);
        assert_eq!(out.max_depth, 1);
        assert_eq!(sol.values.iter().sum::<f64>(), 1.0);
    }

    #[test]
    fn backtracks_out_of_infeasible_branch() {
        // Root LP has x = 0.6; x >= 1 breaks s and x <= 0 forces y >= 1.2.
        let mut inst = ProblemInstance::with_vars("b", 0);
        inst.add_var("x", VarClass::Binary, 0.0, 1.0, 0.0);
        inst.add_var("y", VarClass::Binary, 0.0, 1.0, 1.0);
        inst.add_row(Row::new("r", vec![(0, 2.0), (1, 1.0)], Relation::Ge, 1.2));
        inst.add_row(Row::new("s", vec![(0, 1.0)], Relation::Le, 0.6));
        let out = dive_with_trace(&inst, DiveRule::Dive1, DEFAULT_MAX_DIVES, &Deadline::never());
        assert!(out.solution.is_none());
        assert!(out.dives >= 2);
        let capped = dive_with_trace(&inst, DiveRule::Dive1, 1, &Deadline::never());
        assert_eq!(capped.dives, 1);
    }

    #[test]
    fn infeasible_root_gives_nothing() {
        let mut inst = ProblemInstance::with_vars("x", 0);
        inst.add_var("x", VarClass::Binary, 0.0, 1.0, 0.0);
        inst.add_row(Row::new("r", vec![(0, 1.0)], Relation::Ge, 2.0));
        let out = dive_with_trace(&inst, DiveRule::Dive2, 10, &Deadline::never());
        assert!(out.solution.is_none() && out.seed_point.is_none());
    }
}
