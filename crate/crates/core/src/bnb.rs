//! Breadth-first branch-and-bound and the neighborhood searches it calls.
//!
//! Open nodes are processed in creation order. If the queue outgrows
//! [`BnbOptions::queue_cap`] it turns into a best-bound priority queue. When
//! heuristics are enabled, local branching runs once after the root and LNS
//! and RINS alternate every [`BnbOptions::heuristic_period`] nodes, each as a
//! budgeted sub-MIP solved by a plain instance of the same search.
use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::deadline::Deadline;
use crate::lp::{Basis, LpOptions, LpStatus, Simplex};
use crate::model::{evaluate, fractionality, ProblemInstance, Relation, Row, Solution, VarClass, INT_TOL};
use crate::rounding::{integral_solution, is_near_integral};

/// Nodes whose bound is within this of the incumbent are pruned.
pub const PRUNE_TOL: f64 = 1e-9;
const LB_CUTOFF_MARGIN: f64 = 1e-6;
const LNS_MAX_ROUNDS: u32 = 20;

#[derive(Debug, Clone, Default)]
pub struct BnbBudget {
    pub node_cap: Option<u64>,
    pub deadline: Deadline,
    /// Stop once `incumbent - bound <= tol * max(1, |incumbent|)`.
    pub gap_tolerance: Option<f64>,
}

impl BnbBudget {
    pub fn unlimited() -> Self {
        BnbBudget::default()
    }

    pub fn nodes(cap: u64) -> Self {
        BnbBudget {
            node_cap: Some(cap),
            ..BnbBudget::default()
        }
    }

    pub fn until(deadline: Deadline) -> Self {
        BnbBudget {
            deadline,
            ..BnbBudget::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct BnbOptions {
    /// Local branching at the root and periodic LNS/RINS.
    pub heuristics: bool,
    pub local_branching_k: usize,
    pub heuristic_period: u64,
    pub destroy_fraction: f64,
    pub queue_cap: usize,
    /// Only solutions strictly below this value are of interest.
    pub cutoff: Option<f64>,
    pub seed: u64,
    pub sub_node_cap: u64,
    pub sub_time_fraction: f64,
    /// Keep the ids of processed nodes in [`BnbResult::processed`].
    pub record_order: bool,
}

impl Default for BnbOptions {
    fn default() -> Self {
        BnbOptions {
            heuristics: true,
            local_branching_k: 10,
            heuristic_period: 50,
            destroy_fraction: 0.3,
            queue_cap: 200_000,
            cutoff: None,
            seed: 0,
            sub_node_cap: 1000,
            sub_time_fraction: 0.1,
            record_order: false,
        }
    }
}

impl BnbOptions {
    /// Pure tree search, as used for sub-MIPs.
    pub fn plain() -> Self {
        BnbOptions {
            heuristics: false,
            ..BnbOptions::default()
        }
    }

    pub fn with_cutoff(mut self, cutoff: f64) -> Self {
        self.cutoff = Some(cutoff);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BnbStatus {
    /// The tree was exhausted (or the gap tolerance met) with a solution.
    Optimal,
    /// The tree was exhausted with no solution below the cutoff.
    Infeasible,
    /// The root relaxation is unbounded.
    Unbounded,
    BudgetExhausted,
}

#[derive(Debug, Clone)]
pub struct BnbResult {
    pub best: Option<Solution>,
    pub lower_bound: f64,
    pub nodes: u64,
    pub status: BnbStatus,
    pub processed: Vec<u64>,
}

/// Receives incumbent improvements and, on request, bound samples.
pub trait IncumbentSink {
    fn improved(&mut self, _solution: &Solution) {}

    fn wants_progress(&self) -> bool {
        false
    }

    fn progress(&mut self, _lower_bound: f64, _incumbent: Option<f64>) {}
}

impl IncumbentSink for () {}

/// An open subproblem: the root bounds plus sparse overrides.
#[derive(Debug, Clone)]
pub struct SearchNode {
    /// `(index, lower, upper)`, sorted by index.
    pub overrides: Vec<(usize, f64, f64)>,
    /// Relaxation value of the parent.
    pub parent_bound: f64,
    pub depth: u32,
    pub id: u64,
    basis: Option<Arc<Basis>>,
}

impl SearchNode {
    pub fn root() -> Self {
        SearchNode {
            overrides: Vec::new(),
            parent_bound: f64::NEG_INFINITY,
            depth: 0,
            id: 0,
            basis: None,
        }
    }

    pub fn bounds(&self, instance: &ProblemInstance) -> (Vec<f64>, Vec<f64>) {
        let mut lower = instance.lower.clone();
        let mut upper = instance.upper.clone();
        for &(j, lo, hi) in &self.overrides {
            lower[j] = lo;
            upper[j] = hi;
        }
        (lower, upper)
    }

    fn child(&self, id: u64, j: usize, lo: f64, hi: f64, bound: f64, basis: Option<Arc<Basis>>) -> SearchNode {
        let mut overrides = self.overrides.clone();
        match overrides.binary_search_by_key(&j, |o| o.0) {
            Ok(k) => overrides[k] = (j, lo, hi),
            Err(k) => overrides.insert(k, (j, lo, hi)),
        }
        SearchNode {
            overrides,
            parent_bound: bound,
            depth: self.depth + 1,
            id,
            basis,
        }
    }
}

/// Most fractional integer entry, smallest index on ties.
pub fn branching_variable(point: &[f64], classes: &[VarClass]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (j, (&x, c)) in point.iter().zip(classes).enumerate() {
        let f = fractionality(x);
        if c.is_integer() && f > INT_TOL && best.is_none_or(|(_, b)| f > b) {
            best = Some((j, f));
        }
    }
    best.map(|(j, _)| j)
}

/// Splits `node` on the most fractional entry of its relaxation point
/// `lp_point` (objective `bound`). Children get ids `next_id` and
/// `next_id + 1`, down child first.
pub fn branch(
    node: &SearchNode,
    lp_point: &[f64],
    bound: f64,
    instance: &ProblemInstance,
    next_id: &mut u64,
) -> Option<(SearchNode, SearchNode)> {
    branch_with_basis(node, lp_point, bound, instance, next_id, None)
}

fn branch_with_basis(
    node: &SearchNode,
    lp_point: &[f64],
    bound: f64,
    instance: &ProblemInstance,
    next_id: &mut u64,
    basis: Option<Arc<Basis>>,
) -> Option<(SearchNode, SearchNode)> {
    let j = branching_variable(lp_point, &instance.var_class)?;
    let (lower, upper) = node.bounds(instance);
    let x = lp_point[j];
    let down = node.child(*next_id, j, lower[j], x.floor(), bound, basis.clone());
    let up = node.child(*next_id + 1, j, x.ceil(), upper[j], bound, basis);
    *next_id += 2;
    Some((down, up))
}

struct ByBound(SearchNode);

impl PartialEq for ByBound {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for ByBound {}

impl PartialOrd for ByBound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ByBound {
    // Reversed so the max-heap pops the smallest bound, then the oldest node.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .0
            .parent_bound
            .total_cmp(&self.0.parent_bound)
            .then(other.0.id.cmp(&self.0.id))
    }
}

enum Queue {
    Fifo(VecDeque<SearchNode>),
    Best(BinaryHeap<ByBound>),
}

impl Queue {
    fn push(&mut self, node: SearchNode, cap: usize) {
        if let Queue::Fifo(q) = self {
            if q.len() >= cap {
                *self = Queue::Best(q.drain(..).map(ByBound).collect());
            }
        }
        match self {
            Queue::Fifo(q) => q.push_back(node),
            Queue::Best(h) => h.push(ByBound(node)),
        }
    }

    fn unpop(&mut self, node: SearchNode) {
        match self {
            Queue::Fifo(q) => q.push_front(node),
            Queue::Best(h) => h.push(ByBound(node)),
        }
    }

    fn pop(&mut self) -> Option<SearchNode> {
        match self {
            Queue::Fifo(q) => q.pop_front(),
            Queue::Best(h) => h.pop().map(|b| b.0),
        }
    }

    fn min_bound(&self) -> f64 {
        match self {
            Queue::Fifo(q) => q.iter().map(|n| n.parent_bound).fold(f64::INFINITY, f64::min),
            Queue::Best(h) => h.peek().map_or(f64::INFINITY, |b| b.0.parent_bound),
        }
    }
}

struct Search<'a> {
    instance: &'a ProblemInstance,
    budget: &'a BnbBudget,
    options: &'a BnbOptions,
    sink: &'a mut dyn IncumbentSink,
    incumbent: Option<Solution>,
    /// Smallest bound among nodes dropped without a conclusive relaxation.
    lost_bound: f64,
    last_lp_point: Option<Vec<f64>>,
    heuristic_calls: u64,
    rng: ChaCha8Rng,
}

impl Search<'_> {
    fn limit(&self) -> f64 {
        let inc = self.incumbent.as_ref().map_or(f64::INFINITY, |s| s.objective);
        inc.min(self.options.cutoff.unwrap_or(f64::INFINITY))
    }

    fn offer(&mut self, solution: Solution) {
        if solution.is_feasible() && solution.objective < self.limit() - PRUNE_TOL {
            self.sink.improved(&solution);
            self.incumbent = Some(solution);
        }
    }

    fn lower_bound(&self, queue: &Queue) -> f64 {
        let inc = self.incumbent.as_ref().map_or(f64::INFINITY, |s| s.objective);
        queue.min_bound().min(self.lost_bound).min(inc)
    }

    fn sub_budget(&self) -> BnbBudget {
        BnbBudget {
            node_cap: Some(self.options.sub_node_cap),
            deadline: self.budget.deadline.share(self.options.sub_time_fraction),
            gap_tolerance: None,
        }
    }

    fn after_root(&mut self) {
        let Some(inc) = self.incumbent.clone() else { return };
        let budget = self.sub_budget();
        if let Some(sol) = local_branching(self.instance, &inc, self.options.local_branching_k, &budget) {
            self.offer(sol);
        }
    }

    fn periodic(&mut self) {
        let Some(inc) = self.incumbent.clone() else { return };
        let budget = self.sub_budget();
        let found = if self.heuristic_calls.is_multiple_of(2) {
            lns(self.instance, &inc, self.options.destroy_fraction, &mut self.rng, &budget)
        } else {
            match &self.last_lp_point {
                Some(p) => rins(self.instance, &inc, &p.clone(), &budget),
                None => None,
            }
        };
        self.heuristic_calls += 1;
        if let Some(sol) = found {
            self.offer(sol);
        }
    }

    fn gap_closed(&self, queue: &Queue) -> bool {
        match (self.budget.gap_tolerance, &self.incumbent) {
            (Some(tol), Some(inc)) => inc.objective - self.lower_bound(queue) <= tol * inc.objective.abs().max(1.0),
            _ => false,
        }
    }
}

/// Breadth-first branch-and-bound. `warm_incumbent` must be in the space of
/// `instance`; it is re-checked and ignored if infeasible.
pub fn solve_bnb(
    instance: &ProblemInstance,
    warm_incumbent: Option<&Solution>,
    budget: &BnbBudget,
    options: &BnbOptions,
    sink: &mut dyn IncumbentSink,
) -> BnbResult {
    let mut search = Search {
        instance,
        budget,
        options,
        sink,
        incumbent: None,
        lost_bound: f64::INFINITY,
        last_lp_point: None,
        heuristic_calls: 0,
        rng: ChaCha8Rng::seed_from_u64(options.seed),
    };
    if let Some(w) = warm_incumbent {
        if let Ok(sol) = evaluate(instance, &w.values) {
            if sol.is_feasible() && sol.objective < search.limit() - PRUNE_TOL {
                search.incumbent = Some(sol);
            }
        }
    }
    let mut simplex = Simplex::new(instance, None);
    let lp_opts = LpOptions {
        deadline: budget.deadline.clone(),
        ..LpOptions::default()
    };
    let mut queue = Queue::Fifo(VecDeque::from([SearchNode::root()]));
    let mut next_id = 1;
    let mut nodes = 0u64;
    let mut processed = Vec::new();
    let mut stopped = false;
    let mut unbounded = false;
    let mut gap_closed = false;

    while let Some(node) = queue.pop() {
        if budget.deadline.expired() || budget.node_cap.is_some_and(|cap| nodes >= cap) {
            queue.unpop(node);
            stopped = true;
            break;
        }
        if node.parent_bound >= search.limit() - PRUNE_TOL {
            continue;
        }
        let (lower, upper) = node.bounds(instance);
        let lp = simplex.solve(&lower, &upper, node.basis.as_deref(), &lp_opts);
        nodes += 1;
        if options.record_order {
            processed.push(node.id);
        }
        match lp.status {
            LpStatus::Infeasible => {}
            LpStatus::Unbounded => {
                unbounded = true;
                break;
            }
            LpStatus::IterationLimit if budget.deadline.expired() => {
                nodes -= 1;
                processed.pop_if(|id| *id == node.id);
                queue.unpop(node);
                stopped = true;
                break;
            }
            LpStatus::IterationLimit => search.lost_bound = search.lost_bound.min(node.parent_bound),
            LpStatus::Optimal => {
                let bound = lp.objective;
                if bound < search.limit() - PRUNE_TOL {
                    if is_near_integral(&lp.point, &instance.var_class) {
                        match integral_solution(instance, &lp.point, &budget.deadline) {
                            Some(sol) => search.offer(sol),
                            None => search.lost_bound = search.lost_bound.min(bound),
                        }
                    } else {
                        let basis = lp.basis.map(Arc::new);
                        if let Some((down, up)) = branch_with_basis(&node, &lp.point, bound, instance, &mut next_id, basis) {
                            queue.push(down, options.queue_cap);
                            queue.push(up, options.queue_cap);
                        }
                    }
                    search.last_lp_point = Some(lp.point);
                }
            }
        }
        if options.heuristics && !budget.deadline.expired() {
            if nodes == 1 {
                search.after_root();
            } else if nodes.is_multiple_of(options.heuristic_period.max(1)) {
                search.periodic();
            }
        }
        if search.sink.wants_progress() {
            let (lb, inc) = (search.lower_bound(&queue), search.incumbent.as_ref().map(|s| s.objective));
            search.sink.progress(lb, inc);
        }
        if search.gap_closed(&queue) {
            gap_closed = true;
            break;
        }
    }

    let status = if unbounded {
        BnbStatus::Unbounded
    } else if gap_closed {
        BnbStatus::Optimal
    } else if stopped || search.lost_bound < search.limit() - PRUNE_TOL {
        BnbStatus::BudgetExhausted
    } else if search.incumbent.is_some() {
        BnbStatus::Optimal
    } else {
        BnbStatus::Infeasible
    };
    let lower_bound = match status {
        BnbStatus::Unbounded => f64::NEG_INFINITY,
        BnbStatus::Infeasible => f64::INFINITY,
        _ if !stopped && !gap_closed && status == BnbStatus::Optimal => search.limit(),
        _ => search.lower_bound(&queue),
    };
    BnbResult {
        best: search.incumbent,
        lower_bound,
        nodes,
        status,
        processed,
    }
}

fn improvement(instance: &ProblemInstance, incumbent: &Solution, found: Option<Solution>) -> Option<Solution> {
    let sol = evaluate(instance, &found?.values).ok()?;
    (sol.is_feasible() && sol.objective < incumbent.objective - PRUNE_TOL).then_some(sol)
}

fn sub_mip(sub: &ProblemInstance, cutoff: f64, budget: &BnbBudget) -> BnbResult {
    solve_bnb(sub, None, budget, &BnbOptions::plain().with_cutoff(cutoff), &mut ())
}

/// `instance` plus the row `sum_{j in B, c_j = 0} x_j + sum_{j in B, c_j = 1} (1 - x_j) <= k`
/// around `center`. Without binaries, or when `k >= |B|`, the row is
/// vacuous and omitted.
pub fn local_branching_instance(instance: &ProblemInstance, center: &[f64], k: usize) -> ProblemInstance {
    let binaries = instance.binary_indices();
    let mut sub = instance.clone();
    if k >= binaries.len() {
        return sub;
    }
    let mut support = 0usize;
    let coefs = binaries
        .iter()
        .map(|&j| {
            if center[j] > 0.5 {
                support += 1;
                (j, -1.0)
            } else {
                (j, 1.0)
            }
        })
        .collect();
    sub.add_row(Row::new("local_branching", coefs, Relation::Le, k as f64 - support as f64));
    sub
}

/// Best solution within binary Hamming distance `k` of `incumbent`, if it
/// improves on it.
pub fn local_branching(instance: &ProblemInstance, incumbent: &Solution, k: usize, sub_budget: &BnbBudget) -> Option<Solution> {
    if instance.binary_indices().is_empty() {
        return None;
    }
    let sub = local_branching_instance(instance, &incumbent.values, k);
    let res = sub_mip(&sub, incumbent.objective - LB_CUTOFF_MARGIN, sub_budget);
    improvement(instance, incumbent, res.best)
}

fn fixed_copy(instance: &ProblemInstance, values: &[f64], fixed: impl IntoIterator<Item = usize>) -> ProblemInstance {
    let mut sub = instance.clone();
    for j in fixed {
        sub.lower[j] = values[j];
        sub.upper[j] = values[j];
    }
    sub
}

/// Fix-and-optimize: repeatedly fixes a random `1 - destroy_fraction` share
/// of the integer variables at the current solution and re-solves the rest,
/// moving to any improvement, until the budget (shared across rounds) runs out.
pub fn lns(
    instance: &ProblemInstance,
    incumbent: &Solution,
    destroy_fraction: f64,
    rng: &mut ChaCha8Rng,
    sub_budget: &BnbBudget,
) -> Option<Solution> {
    let integers = instance.integer_indices();
    let keep = ((1.0 - destroy_fraction.clamp(0.0, 1.0)) * integers.len() as f64).round() as usize;
    let mut current = incumbent.clone();
    let mut improved = false;
    let mut nodes_left = sub_budget.node_cap;
    for _ in 0..LNS_MAX_ROUNDS {
        if sub_budget.deadline.expired() || nodes_left == Some(0) {
            break;
        }
        let mut order = integers.clone();
        order.shuffle(rng);
        let sub = fixed_copy(instance, &current.values, order[..keep].iter().copied());
        let budget = BnbBudget {
            node_cap: nodes_left,
            ..sub_budget.clone()
        };
        let res = sub_mip(&sub, current.objective - LB_CUTOFF_MARGIN, &budget);
        nodes_left = nodes_left.map(|n| n.saturating_sub(res.nodes));
        if let Some(sol) = improvement(instance, &current, res.best) {
            current = sol;
            improved = true;
        } else if keep == 0 || keep == integers.len() {
            // Every round would search the same neighborhood.
            break;
        }
    }
    improved.then_some(current)
}

/// Fixes the integer variables on which `incumbent` and `node_lp_point`
/// agree and searches the rest below a relative cutoff.
pub fn rins(instance: &ProblemInstance, incumbent: &Solution, node_lp_point: &[f64], sub_budget: &BnbBudget) -> Option<Solution> {
    let agree = instance
        .integer_indices()
        .into_iter()
        .filter(|&j| (incumbent.values[j] - node_lp_point[j]).abs() <= INT_TOL);
    let sub = fixed_copy(instance, &incumbent.values, agree);
    let z = incumbent.objective;
    let res = sub_mip(&sub, z - LB_CUTOFF_MARGIN.max(1e-4 * z.abs()), sub_budget);
    improvement(instance, incumbent, res.best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn knapsack() -> ProblemInstance {
        let mut inst = ProblemInstance::with_vars("knap", 0);
        for (name, value) in [("x1", 10.0), ("x2", 6.0), ("x3", 4.0)] {
            inst.add_var(name, VarClass::Binary, 0.0, 1.0, -value);
        }
        inst.add_row(Row::new("w", vec![(0, 5.0), (1, 4.0), (2, 3.0)], Relation::Le, 10.0));
        inst
    }

    #[test]
    fn knapsack_optimum() {
        let res = solve_bnb(&knapsack(), None, &BnbBudget::unlimited(), &BnbOptions::default(), &mut ());
        assert_eq!(res.status, BnbStatus::Optimal);
        let best = res.best.unwrap();
        assert_eq!(best.values, vec![1.0, 1.0, 0.0]);
        assert_eq!(best.objective, -16.0);
        assert_eq!(res.lower_bound, -16.0);
    }

    #[test]
    fn integral_root_is_one_node() {
        let mut inst = ProblemInstance::with_vars("i", 0);
        inst.add_var("x", VarClass::Binary, 0.0, 1.0, -1.0);
        let res = solve_bnb(&inst, None, &BnbBudget::unlimited(), &BnbOptions::default(), &mut ());
        assert_eq!((res.status, res.nodes), (BnbStatus::Optimal, 1));
    }

    #[test]
    fn branching_rule() {
        let classes = [VarClass::Binary; 2];
        assert_eq!(branching_variable(&[0.5, 0.2], &classes), Some(0));
        assert_eq!(branching_variable(&[0.5, 0.5], &classes), Some(0));
        assert_eq!(branching_variable(&[0.0, 1.0], &classes), None);
        let inst = {
            let mut i = ProblemInstance::with_vars("b", 0);
            i.add_var("x1", VarClass::Binary, 0.0, 1.0, 0.0);
            i.add_var("x2", VarClass::Binary, 0.0, 1.0, 0.0);
            i
        };
        let mut next = 1;
        let (down, up) = branch(&SearchNode::root(), &[0.5, 0.2], -3.0, &inst, &mut next).unwrap();
        assert_eq!(down.overrides, vec![(0, 0.0, 0.0)]);
        assert_eq!(up.overrides, vec![(0, 1.0, 1.0)]);
        assert_eq!((down.id, up.id, next), (1, 2, 3));
        assert_eq!(down.parent_bound, -3.0);
    }

    #[test]
    fn local_branching_row() {
        let mut inst = ProblemInstance::with_vars("lb", 0);
        for j in 1..=4 {
            inst.add_var(format!("x{j}"), VarClass::Binary, 0.0, 1.0, 0.0);
        }
        let sub = local_branching_instance(&inst, &[1.0, 0.0, 1.0, 0.0], 2);
        let row = sub.rows.last().unwrap();
        assert_eq!(row.coefs, vec![(0, -1.0), (1, 1.0), (2, -1.0), (3, 1.0)]);
        assert_eq!((row.relation, row.rhs), (Relation::Le, 0.0));
        assert_eq!(local_branching_instance(&inst, &[1.0, 0.0, 1.0, 0.0], 4), inst);
    }

    #[test]
    fn infeasible_and_cutoff() {
        let mut inst = knapsack();
        inst.add_row(Row::new("all", vec![(0, 1.0), (1, 1.0), (2, 1.0)], Relation::Ge, 3.0));
        let res = solve_bnb(&inst, None, &BnbBudget::unlimited(), &BnbOptions::plain(), &mut ());
        assert_eq!(res.status, BnbStatus::Infeasible);
        let cut = BnbOptions::plain().with_cutoff(-16.0);
        let res = solve_bnb(&knapsack(), None, &BnbBudget::unlimited(), &cut, &mut ());
        assert_eq!(res.status, BnbStatus::Infeasible);
        assert!(res.best.is_none());
    }

    #[test]
    fn node_cap_stops_search() {
        let res = solve_bnb(&knapsack(), None, &BnbBudget::nodes(1), &BnbOptions::plain(), &mut ());
        assert_eq!((res.status, res.nodes), (BnbStatus::BudgetExhausted, 1));
        assert!(res.lower_bound <= -16.0);
    }

    #[test]
    fn rins_on_integral_lp_point_finds_nothing() {
        let inst = knapsack();
        let inc = evaluate(&inst, &[1.0, 1.0, 0.0]).unwrap();
        assert!(rins(&inst, &inc, &inc.values.clone(), &BnbBudget::unlimited()).is_none());
        let worse = evaluate(&inst, &[1.0, 0.0, 0.0]).unwrap();
        let better = rins(&inst, &worse, &[0.5, 0.5, 0.5], &BnbBudget::unlimited()).unwrap();
        assert_eq!(better.objective, -16.0);
    }

    #[test]
    fn lns_full_destroy_is_exact() {
        let inst = knapsack();
        let worse = evaluate(&inst, &[0.0, 0.0, 0.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let better = lns(&inst, &worse, 1.0, &mut rng, &BnbBudget::unlimited()).unwrap();
        assert_eq!(better.objective, -16.0);
        assert!(lns(&inst, &worse, 0.0, &mut rng, &BnbBudget::unlimited()).is_none());
    }
}
