//! Instance simplification with an exactly invertible record.
//!
//! Reductions, repeated to a fixed point (at most [`MAX_PASSES`] passes):
//! fixed variables are folded into right-hand sides and the objective
//! constant, empty rows are dropped (or prove infeasibility), singleton rows
//! become bounds, and integer bounds are rounded inward.
use crate::error::{Error, Result};
use crate::model::{evaluate, ProblemInstance, Relation, Row, Solution};

pub const MAX_PASSES: usize = 10;
const TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundSide {
    Lower,
    Upper,
}

/// One reduction, in original indices.
#[derive(Debug, Clone, PartialEq)]
pub enum Reduction {
    FixedVariable { index: usize, value: f64 },
    RemovedRow { index: usize },
    TightenedBound { index: usize, side: BoundSide, old: f64, new: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PresolveRecord {
    pub reductions: Vec<Reduction>,
    /// Original index of each reduced variable.
    pub kept_vars: Vec<usize>,
    /// Original index of each reduced row.
    pub kept_rows: Vec<usize>,
    pub original_vars: usize,
}

impl PresolveRecord {
    /// The record of a presolve that changed nothing.
    pub fn identity(instance: &ProblemInstance) -> Self {
        PresolveRecord {
            reductions: Vec::new(),
            kept_vars: (0..instance.num_vars()).collect(),
            kept_rows: (0..instance.num_rows()).collect(),
            original_vars: instance.num_vars(),
        }
    }

    /// Original-space values of a reduced-space point.
    pub fn expand(&self, reduced: &[f64]) -> Result<Vec<f64>> {
        if reduced.len() != self.kept_vars.len() {
            return Err(Error::Dimension {
                expected: self.kept_vars.len(),
                got: reduced.len(),
            });
        }
        let mut values = vec![0.0; self.original_vars];
        for (&j, &v) in self.kept_vars.iter().zip(reduced) {
            values[j] = v;
        }
        for r in &self.reductions {
            if let Reduction::FixedVariable { index, value } = *r {
                values[index] = value;
            }
        }
        Ok(values)
    }

    /// Reduced-space projection of an original-space point.
    pub fn crush(&self, original: &[f64]) -> Result<Vec<f64>> {
        if original.len() != self.original_vars {
            return Err(Error::Dimension {
                expected: self.original_vars,
                got: original.len(),
            });
        }
        Ok(self.kept_vars.iter().map(|&j| original[j]).collect())
    }
}

/// Maps a reduced-space solution back to the original instance.
pub fn uncrush(reduced_solution: &Solution, record: &PresolveRecord, original: &ProblemInstance) -> Result<Solution> {
    if record.original_vars != original.num_vars() {
        return Err(Error::Dimension {
            expected: original.num_vars(),
            got: record.original_vars,
        });
    }
    evaluate(original, &record.expand(&reduced_solution.values)?)
}

struct Work<'a> {
    inst: &'a ProblemInstance,
    lower: Vec<f64>,
    upper: Vec<f64>,
    fixed: Vec<Option<f64>>,
    row_alive: Vec<bool>,
    reductions: Vec<Reduction>,
}

impl Work<'_> {
    fn tighten(&mut self, j: usize, side: BoundSide, value: f64) -> bool {
        let value = match (self.inst.is_integer(j), side) {
            (true, BoundSide::Lower) => (value - TOL).ceil(),
            (true, BoundSide::Upper) => (value + TOL).floor(),
            (false, _) => value,
        };
        let slot = match side {
            BoundSide::Lower => &mut self.lower[j],
            BoundSide::Upper => &mut self.upper[j],
        };
        let stricter = match side {
            BoundSide::Lower => value > *slot + TOL,
            BoundSide::Upper => value < *slot - TOL,
        };
        if !stricter {
            return false;
        }
        let old = *slot;
        *slot = value;
        self.reductions.push(Reduction::TightenedBound {
            index: j,
            side,
            old,
            new: value,
        });
        true
    }

    fn check_domain(&mut self, j: usize) -> Result<()> {
        let (lo, hi) = (self.lower[j], self.upper[j]);
        if lo > hi + TOL {
            return Err(Error::ProvenInfeasible(format!(
                "variable {} has empty domain [{lo}, {hi}]",
                self.inst.var_names[j]
            )));
        }
        if lo > hi {
            self.upper[j] = lo;
        }
        Ok(())
    }

    fn pass(&mut self) -> Result<bool> {
        let mut changed = false;
        for j in 0..self.inst.num_vars() {
            if self.fixed[j].is_none() && self.lower[j] == self.upper[j] {
                self.fixed[j] = Some(self.lower[j]);
                self.reductions.push(Reduction::FixedVariable {
                    index: j,
                    value: self.lower[j],
                });
                changed = true;
            }
        }

        for (i, row) in self.inst.rows.iter().enumerate() {
            if !self.row_alive[i] {
                continue;
            }
            let mut rhs = row.rhs;
            let mut free_terms = row.coefs.iter().filter(|&&(_, a)| a != 0.0).filter(|&&(j, a)| match self.fixed[j] {
                Some(v) => {
                    rhs -= a * v;
                    false
                }
                None => true,
            });
            let first = free_terms.next().copied();
            let more = free_terms.next().is_some();
            match (first, more) {
                (None, _) => {
                    let ok = match row.relation {
                        Relation::Le => 0.0 <= rhs + TOL,
                        Relation::Ge => 0.0 >= rhs - TOL,
                        Relation::Eq => rhs.abs() <= TOL,
                    };
                    if !ok {
                        return Err(Error::ProvenInfeasible(format!(
                            "row {} reads 0 {:?} {rhs}",
                            row.name, row.relation
                        )));
                    }
                }
                (Some((j, a)), false) => {
                    let bound = rhs / a;
                    let (lower, upper) = match (row.relation, a > 0.0) {
                        (Relation::Le, true) | (Relation::Ge, false) => (false, true),
                        (Relation::Le, false) | (Relation::Ge, true) => (true, false),
                        (Relation::Eq, _) => (true, true),
                    };
                    if lower {
                        self.tighten(j, BoundSide::Lower, bound);
                    }
                    if upper {
                        self.tighten(j, BoundSide::Upper, bound);
                    }
                    self.check_domain(j)?;
                }
                (Some(_), true) => continue,
            }
            self.row_alive[i] = false;
            self.reductions.push(Reduction::RemovedRow { index: i });
            changed = true;
        }

        for j in 0..self.inst.num_vars() {
            if self.inst.is_integer(j) && self.fixed[j].is_none() {
                let (lo, hi) = (self.lower[j], self.upper[j]);
                if lo.is_finite() {
                    changed |= self.tighten(j, BoundSide::Lower, lo);
                }
                if hi.is_finite() {
                    changed |= self.tighten(j, BoundSide::Upper, hi);
                }
                self.check_domain(j)?;
            }
        }
        Ok(changed)
    }
}

/// Simplifies `instance`. Fails with [`Error::ProvenInfeasible`] when a
/// reduction exposes a contradiction.
pub fn presolve(instance: &ProblemInstance) -> Result<(ProblemInstance, PresolveRecord)> {
    let n = instance.num_vars();
    let mut work = Work {
        inst: instance,
        lower: instance.lower.clone(),
        upper: instance.upper.clone(),
        fixed: vec![None; n],
        row_alive: vec![true; instance.num_rows()],
        reductions: Vec::new(),
    };
    for j in 0..n {
        work.check_domain(j)?;
    }
    for _ in 0..MAX_PASSES {
        if !work.pass()? {
            break;
        }
    }

    let kept_vars: Vec<usize> = (0..n).filter(|&j| work.fixed[j].is_none()).collect();
    let mut new_index = vec![usize::MAX; n];
    for (k, &j) in kept_vars.iter().enumerate() {
        new_index[j] = k;
    }
    let mut reduced = ProblemInstance::with_vars(instance.name.clone(), 0);
    reduced.sense = instance.sense;
    reduced.objective_constant = instance.objective_constant
        + (0..n)
            .filter_map(|j| work.fixed[j].map(|v| instance.objective[j] * v))
            .sum::<f64>();
    for &j in &kept_vars {
        reduced.add_var(
            instance.var_names[j].clone(),
            instance.var_class[j],
            work.lower[j],
            work.upper[j],
            instance.objective[j],
        );
    }
    let kept_rows: Vec<usize> = (0..instance.num_rows()).filter(|&i| work.row_alive[i]).collect();
    for &i in &kept_rows {
        let row = &instance.rows[i];
        let mut rhs = row.rhs;
        let mut coefs = Vec::with_capacity(row.coefs.len());
        for &(j, a) in &row.coefs {
            match work.fixed[j] {
                Some(v) => rhs -= a * v,
                None if a != 0.0 => coefs.push((new_index[j], a)),
                None => {}
            }
        }
        reduced.add_row(Row::new(row.name.clone(), coefs, row.relation, rhs));
    }
    let record = PresolveRecord {
        reductions: work.reductions,
        kept_vars,
        kept_rows,
        original_vars: n,
    };
    Ok((reduced, record))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::VarClass;

    #[test]
    fn singleton_row_becomes_bound() {
        let mut inst = ProblemInstance::with_vars("p", 2);
        inst.var_class = vec![VarClass::GeneralInteger; 2];
        inst.upper = vec![10.0, 10.0];
        inst.add_row(Row::new("s", vec![(0, 2.0)], Relation::Le, 4.0));
        inst.add_row(Row::new("k", vec![(0, 1.0), (1, 1.0)], Relation::Ge, 1.0));
        let (red, rec) = presolve(&inst).unwrap();
        assert_eq!(red.num_rows(), 1);
        assert_eq!(red.upper[0], 2.0);
        assert!(rec.reductions.contains(&Reduction::RemovedRow { index: 0 }));
        assert!(rec.reductions.contains(&Reduction::TightenedBound {
            index: 0,
            side: BoundSide::Upper,
            old: 10.0,
            new: 2.0
        }));
    }

    #[test]
    fn fixed_variable_folds_into_constant() {
        let mut inst = ProblemInstance::with_vars("p", 2);
        inst.objective = vec![5.0, 1.0];
        inst.lower = vec![3.0, 0.0];
        inst.upper = vec![3.0, 9.0];
        inst.add_row(Row::new("r", vec![(0, 1.0), (1, 1.0)], Relation::Ge, 4.5));
        inst.add_row(Row::new("q", vec![(0, 2.0), (1, -1.0)], Relation::Ge, 0.0));
        let (red, rec) = presolve(&inst).unwrap();
        assert_eq!(red.num_vars(), 1);
        assert_eq!(red.objective_constant, 15.0);
        assert_eq!(rec.kept_vars, vec![1]);
        // Both rows are singletons once x0 is gone: 1.5 <= x1 <= 6.
        assert_eq!((red.lower[0], red.upper[0]), (1.5, 6.0));
        let sol = evaluate(&red, &[2.0]).unwrap();
        let orig = uncrush(&sol, &rec, &inst).unwrap();
        assert_eq!(orig.values, vec![3.0, 2.0]);
        assert_eq!(orig.objective, sol.objective);
        assert!(orig.is_feasible());
    }

    #[test]
    fn empty_negative_row_is_infeasible() {
        let mut inst = ProblemInstance::with_vars("p", 1);
        inst.add_row(Row::new("z", vec![(0, 0.0)], Relation::Le, -1.0));
        assert!(matches!(presolve(&inst), Err(Error::ProvenInfeasible(_))));
    }

    #[test]
    fn integer_singleton_with_no_integer_point() {
        let mut inst = ProblemInstance::with_vars("p", 1);
        inst.var_class = vec![VarClass::GeneralInteger];
        inst.upper = vec![5.0];
        inst.add_row(Row::new("e", vec![(0, 2.0)], Relation::Eq, 3.0));
        assert!(matches!(presolve(&inst), Err(Error::ProvenInfeasible(_))));
    }

    #[test]
    fn identity_record_round_trip() {
        let mut inst = ProblemInstance::with_vars("p", 2);
        inst.objective = vec![1.0, 2.0];
        inst.add_row(Row::new("r", vec![(0, 1.0), (1, 1.0)], Relation::Ge, 1.0));
        let (red, rec) = presolve(&inst).unwrap();
        assert_eq!(red, inst);
        assert_eq!(rec, PresolveRecord::identity(&inst));
        let sol = evaluate(&red, &[1.0, 0.0]).unwrap();
        assert_eq!(uncrush(&sol, &rec, &inst).unwrap(), sol);
    }

    #[test]
    fn fixed_record_reinserts_value() {
        let mut inst = ProblemInstance::with_vars("p", 2);
        let mut rec = PresolveRecord::identity(&inst);
        rec.kept_vars = vec![1];
        rec.reductions.push(Reduction::FixedVariable { index: 0, value: 3.0 });
        inst.upper = vec![5.0, 5.0];
        let red = Solution {
            values: vec![1.0],
            objective: 0.0,
            max_violation: 0.0,
        };
        assert_eq!(uncrush(&red, &rec, &inst).unwrap().values, vec![3.0, 1.0]);
        let bad = Solution {
            values: vec![1.0, 2.0],
            ..red
        };
        assert!(matches!(uncrush(&bad, &rec, &inst), Err(Error::Dimension { .. })));
    }
}
