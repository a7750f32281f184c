//! Continuous relaxations.
//!
//! A dense bounded-variable primal simplex. Every row `a_i x (rel) b_i` gets a
//! logical variable `r_i = a_i x` whose bounds encode the relation, so the
//! constraint system is always `A x - r = 0` and the all-logical basis is a
//! valid start. Phase one minimizes the sum of bound infeasibilities of the
//! basic variables; phase two the objective. Pricing is Dantzig's rule, with a
//! switch to Bland's rule after a long run of degenerate pivots. The basis
//! inverse is kept explicitly, updated in product form and rebuilt every
//! [`REFACTOR_PERIOD`] pivots.
use std::collections::BTreeMap;

use crate::deadline::Deadline;
use crate::model::{ProblemInstance, Relation};

const PRIMAL_TOL: f64 = 1e-9;
const DUAL_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
const SINGULAR_TOL: f64 = 1e-11;
const REFACTOR_PERIOD: usize = 100;
const BLAND_AFTER_DEGENERATE: usize = 5000;
pub const DEFAULT_ITERATION_CAP: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VarState {
    Basic,
    Lower,
    Upper,
    Free,
}

/// A simplex basis over structural and logical variables, reusable as a warm
/// start for a problem with the same rows and columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    basic: Vec<usize>,
    state: Vec<VarState>,
}

impl Basis {
    pub fn num_rows(&self) -> usize {
        self.basic.len()
    }
}

#[derive(Debug, Clone)]
pub struct LpResult {
    pub status: LpStatus,
    /// Structural values; for `Optimal` a vertex of the relaxation.
    pub point: Vec<f64>,
    /// Objective of `point` including the constant term.
    pub objective: f64,
    pub iterations: usize,
    pub basis: Option<Basis>,
}

/// Replacement objective for a relaxation solve.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveOverride {
    pub costs: Vec<f64>,
    pub constant: f64,
}

/// An instance with integrality dropped, optional bound overrides and an
/// optional replacement objective.
#[derive(Debug, Clone)]
pub struct LpRelaxation<'a> {
    pub instance: &'a ProblemInstance,
    pub bound_overrides: BTreeMap<usize, (f64, f64)>,
    pub objective_override: Option<ObjectiveOverride>,
}

impl<'a> LpRelaxation<'a> {
    pub fn new(instance: &'a ProblemInstance) -> Self {
        LpRelaxation {
            instance,
            bound_overrides: BTreeMap::new(),
            objective_override: None,
        }
    }

    pub fn bounds(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lower = self.instance.lower.clone();
        let mut upper = self.instance.upper.clone();
        for (&j, &(lo, hi)) in &self.bound_overrides {
            lower[j] = lo;
            upper[j] = hi;
        }
        (lower, upper)
    }
}

#[derive(Debug, Clone)]
pub struct LpOptions {
    pub iteration_cap: usize,
    pub deadline: Deadline,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions {
            iteration_cap: DEFAULT_ITERATION_CAP,
            deadline: Deadline::never(),
        }
    }
}

/// Solves a relaxation from scratch or from `warm_basis`.
pub fn solve_lp(relaxation: &LpRelaxation<'_>, warm_basis: Option<&Basis>, iteration_cap: usize) -> LpResult {
    let mut simplex = Simplex::new(relaxation.instance, relaxation.objective_override.as_ref());
    let (lower, upper) = relaxation.bounds();
    simplex.solve(
        &lower,
        &upper,
        warm_basis,
        &LpOptions {
            iteration_cap: iteration_cap.max(1),
            deadline: Deadline::never(),
        },
    )
}

enum Pricing {
    Dantzig,
    Bland,
}

/// Reusable simplex workspace for one constraint matrix. Bounds may change
/// between solves; the objective can be replaced with [`Simplex::set_objective`].
#[derive(Debug, Clone)]
pub struct Simplex {
    m: usize,
    n: usize,
    /// Columns of `[A | -I]`.
    cols: Vec<Vec<(usize, f64)>>,
    cost: Vec<f64>,
    constant: f64,
    row_lo: Vec<f64>,
    row_hi: Vec<f64>,

    lo: Vec<f64>,
    hi: Vec<f64>,
    x: Vec<f64>,
    state: Vec<VarState>,
    basic: Vec<usize>,
    binv: Vec<f64>,
}

impl Simplex {
    pub fn new(instance: &ProblemInstance, objective: Option<&ObjectiveOverride>) -> Self {
        let n = instance.num_vars();
        let m = instance.num_rows();
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n + m];
        let mut row_lo = Vec::with_capacity(m);
        let mut row_hi = Vec::with_capacity(m);
        for (i, row) in instance.rows.iter().enumerate() {
            for &(j, a) in &row.coefs {
                if a != 0.0 {
                    cols[j].push((i, a));
                }
            }
            cols[n + i].push((i, -1.0));
            let (lo, hi) = match row.relation {
                Relation::Le => (f64::NEG_INFINITY, row.rhs),
                Relation::Ge => (row.rhs, f64::INFINITY),
                Relation::Eq => (row.rhs, row.rhs),
            };
            row_lo.push(lo);
            row_hi.push(hi);
        }
        let mut simplex = Simplex {
            m,
            n,
            cols,
            cost: vec![0.0; n + m],
            constant: 0.0,
            row_lo,
            row_hi,
            lo: Vec::new(),
            hi: Vec::new(),
            x: vec![0.0; n + m],
            state: Vec::new(),
            basic: Vec::new(),
            binv: Vec::new(),
        };
        match objective {
            Some(o) => simplex.set_objective(&o.costs, o.constant),
            None => simplex.set_objective(&instance.objective, instance.objective_constant),
        }
        simplex
    }

    pub fn set_objective(&mut self, costs: &[f64], constant: f64) {
        assert_eq!(costs.len(), self.n, "objective length");
        self.cost[..self.n].copy_from_slice(costs);
        self.cost[self.n..].iter_mut().for_each(|c| *c = 0.0);
        self.constant = constant;
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn solve(&mut self, lower: &[f64], upper: &[f64], warm: Option<&Basis>, opts: &LpOptions) -> LpResult {
        assert_eq!(lower.len(), self.n);
        assert_eq!(upper.len(), self.n);
        self.lo = lower.iter().chain(&self.row_lo).copied().collect();
        self.hi = upper.iter().chain(&self.row_hi).copied().collect();

        if (0..self.n + self.m).any(|j| self.lo[j] > self.hi[j] + PRIMAL_TOL) {
            self.basic.clear();
            self.state.clear();
            self.x[..self.n].copy_from_slice(lower);
            return self.result(LpStatus::Infeasible, 0);
        }

        let warm_ok = match warm {
            Some(b) if b.basic.len() == self.m && b.state.len() == self.n + self.m => {
                self.basic = b.basic.clone();
                self.state = b.state.clone();
                self.refactor()
            }
            _ => false,
        };
        if !warm_ok {
            self.slack_basis();
        }
        self.place_nonbasics();
        self.recompute_basics();

        let mut iterations = 0;
        let mut restarted = false;
        let status = loop {
            match self.iterate(opts, &mut iterations) {
                Ok(status) => break status,
                Err(()) if !restarted => {
                    restarted = true;
                    self.slack_basis();
                    self.place_nonbasics();
                    self.recompute_basics();
                }
                Err(()) => break LpStatus::IterationLimit,
            }
        };
        self.result(status, iterations)
    }

    fn result(&self, status: LpStatus, iterations: usize) -> LpResult {
        let mut point: Vec<f64> = self.x[..self.n].to_vec();
        if status == LpStatus::Optimal {
            for (j, v) in point.iter_mut().enumerate() {
                *v = v.clamp(self.lo[j], self.hi[j]);
            }
        }
        let objective = self.cost[..self.n].iter().zip(&point).map(|(c, x)| c * x).sum::<f64>() + self.constant;
        let basis = (self.state.len() == self.n + self.m).then(|| Basis {
            basic: self.basic.clone(),
            state: self.state.clone(),
        });
        LpResult {
            status,
            point,
            objective,
            iterations,
            basis,
        }
    }

    fn slack_basis(&mut self) {
        self.basic = (self.n..self.n + self.m).collect();
        self.state = vec![VarState::Lower; self.n + self.m];
        for i in 0..self.m {
            self.state[self.n + i] = VarState::Basic;
        }
        self.binv = vec![0.0; self.m * self.m];
        for i in 0..self.m {
            self.binv[i * self.m + i] = -1.0;
        }
    }

    /// Puts every nonbasic variable on a finite bound consistent with its state.
    fn place_nonbasics(&mut self) {
        for j in 0..self.n + self.m {
            let (lo, hi) = (self.lo[j], self.hi[j]);
            let st = match self.state[j] {
                VarState::Basic => continue,
                VarState::Lower if lo.is_finite() => VarState::Lower,
                VarState::Upper if hi.is_finite() => VarState::Upper,
                _ if lo.is_finite() => VarState::Lower,
                _ if hi.is_finite() => VarState::Upper,
                _ => VarState::Free,
            };
            self.state[j] = st;
            self.x[j] = match st {
                VarState::Lower => lo,
                VarState::Upper => hi,
                _ => 0.0,
            };
        }
    }

    fn recompute_basics(&mut self) {
        let m = self.m;
        let mut v = vec![0.0; m];
        for j in 0..self.n + m {
            if self.state[j] != VarState::Basic && self.x[j] != 0.0 {
                for &(i, a) in &self.cols[j] {
                    v[i] += a * self.x[j];
                }
            }
        }
        for r in 0..m {
            let row = &self.binv[r * m..(r + 1) * m];
            let s: f64 = row.iter().zip(&v).map(|(b, vi)| b * vi).sum();
            self.x[self.basic[r]] = -s;
        }
    }

    /// Rebuilds the basis inverse by Gauss-Jordan elimination with partial
    /// pivoting. Returns false on a (numerically) singular basis.
    fn refactor(&mut self) -> bool {
        let m = self.m;
        let mut seen = vec![false; self.n + m];
        for &j in &self.basic {
            if j >= self.n + m || seen[j] {
                return false;
            }
            seen[j] = true;
        }
        for j in 0..self.n + m {
            let basic = self.state[j] == VarState::Basic;
            if basic != seen[j] {
                return false;
            }
        }
        let mut a = vec![0.0; m * m];
        for (c, &j) in self.basic.iter().enumerate() {
            for &(i, v) in &self.cols[j] {
                a[i * m + c] = v;
            }
        }
        match invert(a, m) {
            Some(inv) => {
                self.binv = inv;
                true
            }
            None => false,
        }
    }

    fn iterate(&mut self, opts: &LpOptions, iterations: &mut usize) -> Result<LpStatus, ()> {
        let m = self.m;
        let total = self.n + m;
        let mut since_refactor = 0usize;
        let mut degenerate_run = 0usize;
        let mut pricing = Pricing::Dantzig;
        let mut cb = vec![0.0; m];
        let mut y = vec![0.0; m];
        let mut alpha = vec![0.0; m];

        loop {
            if *iterations >= opts.iteration_cap {
                return Ok(LpStatus::IterationLimit);
            }
            if (*iterations).is_multiple_of(32) && opts.deadline.expired() {
                return Ok(LpStatus::IterationLimit);
            }
            if since_refactor >= REFACTOR_PERIOD {
                if !self.refactor() {
                    return Err(());
                }
                self.recompute_basics();
                since_refactor = 0;
            }

            // Phase costs on the basic variables.
            let mut phase_one = false;
            for r in 0..m {
                let j = self.basic[r];
                let v = self.x[j];
                cb[r] = if v < self.lo[j] - PRIMAL_TOL {
                    phase_one = true;
                    -1.0
                } else if v > self.hi[j] + PRIMAL_TOL {
                    phase_one = true;
                    1.0
                } else {
                    0.0
                };
            }
            if !phase_one {
                for r in 0..m {
                    cb[r] = self.cost[self.basic[r]];
                }
            }
            y.iter_mut().for_each(|v| *v = 0.0);
            for r in 0..m {
                if cb[r] != 0.0 {
                    let row = &self.binv[r * m..(r + 1) * m];
                    for (yk, b) in y.iter_mut().zip(row) {
                        *yk += cb[r] * b;
                    }
                }
            }

            // Pricing.
            let mut entering: Option<(usize, f64)> = None;
            for j in 0..total {
                let st = self.state[j];
                if st == VarState::Basic || self.lo[j] == self.hi[j] {
                    continue;
                }
                let cj = if phase_one { 0.0 } else { self.cost[j] };
                let d = cj - self.cols[j].iter().map(|&(i, a)| y[i] * a).sum::<f64>();
                let dir = match st {
                    VarState::Lower if d < -DUAL_TOL => 1.0,
                    VarState::Upper if d > DUAL_TOL => -1.0,
                    VarState::Free if d.abs() > DUAL_TOL => -d.signum(),
                    _ => continue,
                };
                match pricing {
                    Pricing::Bland => {
                        entering = Some((j, dir));
                        break;
                    }
                    Pricing::Dantzig => {
                        if entering.is_none_or(|(_, best)| d.abs() > best.abs()) {
                            entering = Some((j, d.abs() * dir));
                        }
                    }
                }
            }
            let Some((q, signed)) = entering else {
                if since_refactor > 0 {
                    // Confirm the verdict on a fresh factorization.
                    if !self.refactor() {
                        return Err(());
                    }
                    self.recompute_basics();
                    since_refactor = 0;
                    continue;
                }
                return Ok(if phase_one { LpStatus::Infeasible } else { LpStatus::Optimal });
            };
            let dir = signed.signum();

            // alpha = B^-1 a_q
            alpha.iter_mut().for_each(|v| *v = 0.0);
            for &(i, a) in &self.cols[q] {
                for r in 0..m {
                    alpha[r] += self.binv[r * m + i] * a;
                }
            }

            // Ratio test. delta[r] = change of basic r per unit step.
            let flip = self.hi[q] - self.lo[q];
            let ratio = |r: usize, relax: f64| -> Option<(f64, VarState)> {
                let delta = -dir * alpha[r];
                if delta.abs() <= PIVOT_TOL {
                    return None;
                }
                let j = self.basic[r];
                let (v, lo, hi) = (self.x[j], self.lo[j], self.hi[j]);
                if delta > 0.0 {
                    if v < lo - PRIMAL_TOL {
                        Some(((lo - v + relax) / delta, VarState::Lower))
                    } else if hi.is_finite() && v <= hi + PRIMAL_TOL {
                        Some(((hi - v + relax) / delta, VarState::Upper))
                    } else {
                        None
                    }
                } else if v > hi + PRIMAL_TOL {
                    Some(((v - hi + relax) / -delta, VarState::Upper))
                } else if lo.is_finite() && v >= lo - PRIMAL_TOL {
                    Some(((v - lo + relax) / -delta, VarState::Lower))
                } else {
                    None
                }
            };

            let mut leave: Option<(usize, f64, VarState)> = None;
            match pricing {
                Pricing::Dantzig => {
                    let mut t_max = f64::INFINITY;
                    for r in 0..m {
                        if let Some((t, _)) = ratio(r, PRIMAL_TOL) {
                            t_max = t_max.min(t);
                        }
                    }
                    if t_max.is_finite() {
                        let mut best = 0.0;
                        for r in 0..m {
                            if let Some((t, st)) = ratio(r, 0.0) {
                                if t <= t_max && alpha[r].abs() > best {
                                    best = alpha[r].abs();
                                    leave = Some((r, t.max(0.0), st));
                                }
                            }
                        }
                    }
                }
                Pricing::Bland => {
                    for r in 0..m {
                        if let Some((t, st)) = ratio(r, 0.0) {
                            let t = t.max(0.0);
                            let better = match leave {
                                None => true,
                                Some((lr, lt, _)) => t < lt || (t == lt && self.basic[r] < self.basic[lr]),
                            };
                            if better {
                                leave = Some((r, t, st));
                            }
                        }
                    }
                }
            }

            *iterations += 1;
            let step = match leave {
                Some((_, t, _)) if flip <= t => None,
                Some(l) => Some(l),
                None if flip.is_finite() => None,
                None => {
                    if phase_one {
                        return Err(());
                    }
                    return Ok(LpStatus::Unbounded);
                }
            };

            match step {
                None => {
                    // Bound flip of the entering variable.
                    for r in 0..m {
                        self.x[self.basic[r]] -= dir * flip * alpha[r];
                    }
                    let (nx, ns) = if dir > 0.0 {
                        (self.hi[q], VarState::Upper)
                    } else {
                        (self.lo[q], VarState::Lower)
                    };
                    self.x[q] = nx;
                    self.state[q] = ns;
                    degenerate_run = 0;
                }
                Some((r, t, leave_state)) => {
                    for k in 0..m {
                        self.x[self.basic[k]] -= dir * t * alpha[k];
                    }
                    self.x[q] += dir * t;
                    let out = self.basic[r];
                    self.x[out] = if leave_state == VarState::Lower { self.lo[out] } else { self.hi[out] };
                    self.state[out] = leave_state;
                    self.state[q] = VarState::Basic;
                    self.basic[r] = q;
                    self.pivot(r, &alpha);
                    since_refactor += 1;

                    if t <= 1e-12 {
                        degenerate_run += 1;
                        if degenerate_run >= BLAND_AFTER_DEGENERATE {
                            pricing = Pricing::Bland;
                        }
                    } else {
                        degenerate_run = 0;
                    }
                }
            }
        }
    }

    fn pivot(&mut self, r: usize, alpha: &[f64]) {
        let m = self.m;
        let piv = alpha[r];
        let (head, tail) = self.binv.split_at_mut(r * m);
        let (prow, tail) = tail.split_at_mut(m);
        prow.iter_mut().for_each(|v| *v /= piv);
        for (i, chunk) in head.chunks_mut(m).enumerate() {
            let f = alpha[i];
            if f != 0.0 {
                chunk.iter_mut().zip(prow.iter()).for_each(|(v, p)| *v -= f * p);
            }
        }
        for (k, chunk) in tail.chunks_mut(m).enumerate() {
            let f = alpha[r + 1 + k];
            if f != 0.0 {
                chunk.iter_mut().zip(prow.iter()).for_each(|(v, p)| *v -= f * p);
            }
        }
    }
}

/// Dense inverse of a row-major `m x m` matrix.
fn invert(mut a: Vec<f64>, m: usize) -> Option<Vec<f64>> {
    let mut inv = vec![0.0; m * m];
    for i in 0..m {
        inv[i * m + i] = 1.0;
    }
    for c in 0..m {
        let p = (c..m).max_by(|&i, &k| a[i * m + c].abs().total_cmp(&a[k * m + c].abs()))?;
        if a[p * m + c].abs() < SINGULAR_TOL {
            return None;
        }
        if p != c {
            for k in 0..m {
                a.swap(p * m + k, c * m + k);
                inv.swap(p * m + k, c * m + k);
            }
        }
        let d = a[c * m + c];
        for k in 0..m {
            a[c * m + k] /= d;
            inv[c * m + k] /= d;
        }
        for i in 0..m {
            if i == c {
                continue;
            }
            let f = a[i * m + c];
            if f == 0.0 {
                continue;
            }
            for k in 0..m {
                a[i * m + k] -= f * a[c * m + k];
                inv[i * m + k] -= f * inv[c * m + k];
            }
        }
    }
    Some(inv)
}
