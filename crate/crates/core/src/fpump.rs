//! Feasibility pump with a convexified distance objective.
//!
//! The LP step minimizes `(1 - alpha) * distance(x, x_tilde) + alpha * s * c x`
//! where `s = sqrt(|I|) / (||c|| + [||c|| = 0])` and `I` is the set of integer
//! variables. Distances to general-integer targets need one auxiliary
//! variable each, so every iteration works on an augmented copy of the
//! instance.
use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::deadline::Deadline;
use crate::error::{Error, Result};
use crate::lp::{Basis, LpOptions, LpStatus, ObjectiveOverride, Simplex};
use crate::model::{evaluate, fractionality, ProblemInstance, Relation, Row, Solution, VarClass, INT_TOL};
use crate::rounding::{complete_assignment, integral_solution, is_near_integral, round_point};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FpConfig {
    pub alpha: f64,
    /// Iteration limit.
    pub iterations: u32,
    /// Cycle window: a rounding equal to one of the last `period` roundings
    /// is perturbed.
    pub period: u32,
    pub seed: u64,
}

impl Default for FpConfig {
    fn default() -> Self {
        FpConfig {
            alpha: 0.4,
            iterations: 10,
            period: 20,
            seed: 0,
        }
    }
}

impl FpConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alpha) || self.iterations == 0 || self.period == 0 {
            return Err(Error::InvalidConfig(format!("feasibility pump config {self:?}")));
        }
        Ok(())
    }
}

/// The instance augmented with distance auxiliaries, plus the objective.
#[derive(Debug, Clone)]
pub struct DistanceModel {
    pub instance: ProblemInstance,
    pub objective: ObjectiveOverride,
    /// `(original index, auxiliary index)` per general integer.
    pub auxiliaries: Vec<(usize, usize)>,
}

/// Weight of the original cost vector inside the distance objective.
pub fn cost_scale(instance: &ProblemInstance) -> f64 {
    let integers = instance.var_class.iter().filter(|c| c.is_integer()).count() as f64;
    let norm = instance.objective.iter().map(|c| c * c).sum::<f64>().sqrt();
    integers.sqrt() / (norm + if norm == 0.0 { 1.0 } else { 0.0 })
}

/// Builds the convexified distance objective around `x_tilde`.
pub fn fp_objective(x_tilde: &[f64], alpha: f64, instance: &ProblemInstance) -> Result<DistanceModel> {
    let n = instance.num_vars();
    if x_tilde.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: x_tilde.len(),
        });
    }
    for j in instance.integer_indices() {
        if x_tilde[j].fract() != 0.0 || !x_tilde[j].is_finite() {
            return Err(Error::NotIntegral {
                index: j,
                value: x_tilde[j],
            });
        }
    }
    let scale = cost_scale(instance);
    let dist = 1.0 - alpha;
    let mut model = instance.clone();
    let mut costs: Vec<f64> = instance.objective.iter().map(|c| alpha * scale * c).collect();
    let mut constant = 0.0;
    let mut auxiliaries = Vec::new();
    for j in 0..n {
        match instance.var_class[j] {
            VarClass::Binary if x_tilde[j] == 0.0 => costs[j] += dist,
            VarClass::Binary => {
                costs[j] -= dist;
                constant += dist;
            }
            VarClass::GeneralInteger => {
                let name = format!("dist_{}", instance.var_names[j]);
                let d = model.add_var(name.clone(), VarClass::Continuous, 0.0, f64::INFINITY, 0.0);
                costs.push(dist);
                let t = x_tilde[j];
                model.add_row(Row::new(format!("{name}_lo"), vec![(d, 1.0), (j, -1.0)], Relation::Ge, -t));
                model.add_row(Row::new(format!("{name}_hi"), vec![(d, 1.0), (j, 1.0)], Relation::Ge, t));
                auxiliaries.push((j, d));
            }
            VarClass::Continuous => {}
        }
    }
    model.objective = costs.clone();
    model.objective_constant = constant;
    Ok(DistanceModel {
        instance: model,
        objective: ObjectiveOverride { costs, constant },
        auxiliaries,
    })
}

/// Flips the most fractional binaries and nudges general integers toward
/// the LP point. Always changes at least one non-fixed integer entry.
pub fn perturb(x_tilde: &[f64], last_lp_point: &[f64], instance: &ProblemInstance, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let integers = instance.integer_indices().len();
    let lo = (integers / 10).max(1);
    let hi = (integers / 2).max(1);
    let flips = rng.gen_range(lo..=hi);
    let mut out = x_tilde.to_vec();

    let mut binaries: Vec<usize> = instance
        .binary_indices()
        .into_iter()
        .filter(|&j| instance.lower[j] < instance.upper[j])
        .collect();
    binaries.sort_by(|&a, &b| fractionality(last_lp_point[b]).total_cmp(&fractionality(last_lp_point[a])));
    for &j in binaries.iter().take(flips) {
        out[j] = 1.0 - out[j];
    }
    let shift = |j: usize, toward: f64, v: f64| -> f64 {
        let step = if toward > v { 1.0 } else { -1.0 };
        (v + step).clamp(instance.lower[j], instance.upper[j])
    };
    for j in 0..out.len() {
        if instance.var_class[j] == VarClass::GeneralInteger {
            let p = (2.0 * fractionality(last_lp_point[j])).min(1.0);
            if rng.gen_bool(p) {
                out[j] = shift(j, last_lp_point[j], out[j]);
            }
        }
    }
    if out == x_tilde {
        let movable: Vec<usize> = instance
            .integer_indices()
            .into_iter()
            .filter(|&j| instance.lower[j] < instance.upper[j])
            .collect();
        if let Some(&j) = movable.choose(rng) {
            out[j] = match instance.var_class[j] {
                VarClass::Binary => 1.0 - out[j],
                _ if out[j] + 1.0 <= instance.upper[j] => out[j] + 1.0,
                _ => out[j] - 1.0,
            };
        }
    }
    out
}

#[derive(Debug, Clone)]
pub enum FpOutcome {
    Feasible(Solution),
    /// Iterations ran out; the last rounding and LP point seed a repair.
    Exhausted { x_tilde: Vec<f64>, lp_point: Vec<f64> },
    /// The relaxation itself could not be solved.
    NoPoint,
}

impl FpOutcome {
    pub fn solution(&self) -> Option<&Solution> {
        match self {
            FpOutcome::Feasible(s) => Some(s),
            _ => None,
        }
    }
}

fn rounded_candidate(instance: &ProblemInstance, x_tilde: &[f64], lp_point: &[f64], deadline: &Deadline) -> Option<Solution> {
    let mut values = lp_point.to_vec();
    for j in instance.integer_indices() {
        values[j] = x_tilde[j];
    }
    match evaluate(instance, &values) {
        Ok(sol) if sol.is_feasible() => Some(sol),
        _ if instance.var_class.iter().any(|c| !c.is_integer()) => complete_assignment(instance, &values, deadline),
        _ => None,
    }
}

/// Per-iteration trace entry, exposed for tests and examples.
#[derive(Debug, Clone, PartialEq)]
pub struct FpStep {
    pub distance: f64,
    pub perturbed: bool,
}

pub fn run_fp(instance: &ProblemInstance, config: &FpConfig, deadline: &Deadline) -> FpOutcome {
    run_fp_traced(instance, config, deadline, &mut Vec::new())
}

pub fn run_fp_traced(instance: &ProblemInstance, config: &FpConfig, deadline: &Deadline, trace: &mut Vec<FpStep>) -> FpOutcome {
    if config.validate().is_err() {
        return FpOutcome::NoPoint;
    }
    let n = instance.num_vars();
    let opts = LpOptions {
        deadline: deadline.clone(),
        ..LpOptions::default()
    };
    let root = Simplex::new(instance, None).solve(&instance.lower, &instance.upper, None, &opts);
    if root.status != LpStatus::Optimal {
        return FpOutcome::NoPoint;
    }
    if is_near_integral(&root.point, &instance.var_class) {
        if let Some(sol) = integral_solution(instance, &root.point, deadline) {
            return FpOutcome::Feasible(sol);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut lp_point = root.point;
    let mut x_tilde = round_point(&lp_point, &instance.var_class);
    let mut history: VecDeque<Vec<f64>> = VecDeque::from([x_tilde.clone()]);
    let mut basis: Option<Basis> = None;

    for _ in 0..config.iterations {
        if deadline.expired() {
            break;
        }
        if let Some(sol) = rounded_candidate(instance, &x_tilde, &lp_point, deadline) {
            return FpOutcome::Feasible(sol);
        }
        let model = match fp_objective(&x_tilde, config.alpha, instance) {
            Ok(m) => m,
            Err(_) => break,
        };
        let mut simplex = Simplex::new(&model.instance, Some(&model.objective));
        let res = simplex.solve(&model.instance.lower, &model.instance.upper, basis.as_ref(), &opts);
        if res.status != LpStatus::Optimal {
            break;
        }
        basis = res.basis;
        lp_point = res.point[..n].to_vec();
        if is_near_integral(&lp_point, &instance.var_class) {
            if let Some(sol) = integral_solution(instance, &lp_point, deadline) {
                return FpOutcome::Feasible(sol);
            }
        }
        let mut next = round_point(&lp_point, &instance.var_class);
        let cycled = history.iter().any(|h| integer_part_eq(instance, h, &next));
        if cycled {
            next = perturb(&next, &lp_point, instance, &mut rng);
        }
        trace.push(FpStep {
            distance: res.objective,
            perturbed: cycled,
        });
        if history.len() == config.period as usize {
            history.pop_front();
        }
        history.push_back(next.clone());
        x_tilde = next;
    }
    if let Some(sol) = rounded_candidate(instance, &x_tilde, &lp_point, deadline) {
        return FpOutcome::Feasible(sol);
    }
    FpOutcome::Exhausted { x_tilde, lp_point }
}

fn integer_part_eq(instance: &ProblemInstance, a: &[f64], b: &[f64]) -> bool {
    instance
        .var_class
        .iter()
        .enumerate()
        .all(|(j, c)| !c.is_integer() || (a[j] - b[j]).abs() <= INT_TOL)
}
