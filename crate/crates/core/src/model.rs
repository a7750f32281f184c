//! MILP data model: `min c'x + c0` over linear rows, variable bounds and
//! integrality classes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance on row, bound and integrality violation.
pub const FEAS_TOL: f64 = 1e-6;

/// Values within this distance of an integer count as integral.
pub const INT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VarClass {
    Binary,
    GeneralInteger,
    Continuous,
}

impl VarClass {
    pub fn is_integer(self) -> bool {
        !matches!(self, VarClass::Continuous)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// Direction of the objective as it appeared in the input. The instance itself
/// always minimizes; a maximization input is stored negated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Sense {
    #[default]
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub name: String,
    pub coefs: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Row {
    pub fn new(name: impl Into<String>, coefs: Vec<(usize, f64)>, relation: Relation, rhs: f64) -> Self {
        Row {
            name: name.into(),
            coefs,
            relation,
            rhs,
        }
    }

    pub fn activity(&self, values: &[f64]) -> f64 {
        self.coefs.iter().map(|&(j, a)| a * values[j]).sum()
    }

    /// Amount by which `activity` violates the row (zero when satisfied).
    pub fn violation(&self, activity: f64) -> f64 {
        match self.relation {
            Relation::Le => (activity - self.rhs).max(0.0),
            Relation::Ge => (self.rhs - activity).max(0.0),
            Relation::Eq => (activity - self.rhs).abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    pub name: String,
    pub objective: Vec<f64>,
    /// Added to every reported objective value.
    pub objective_constant: f64,
    pub sense: Sense,
    pub rows: Vec<Row>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub var_class: Vec<VarClass>,
    pub var_names: Vec<String>,
}

impl ProblemInstance {
    /// An instance with `n` continuous variables in `[0, +inf)`, zero
    /// objective and no rows. Mostly useful as a builder starting point.
    pub fn with_vars(name: impl Into<String>, n: usize) -> Self {
        ProblemInstance {
            name: name.into(),
            objective: vec![0.0; n],
            objective_constant: 0.0,
            sense: Sense::Minimize,
            rows: Vec::new(),
            lower: vec![0.0; n],
            upper: vec![f64::INFINITY; n],
            var_class: vec![VarClass::Continuous; n],
            var_names: (0..n).map(|j| format!("x{}", j + 1)).collect(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Appends a variable and returns its index.
    pub fn add_var(&mut self, name: impl Into<String>, class: VarClass, lower: f64, upper: f64, cost: f64) -> usize {
        self.objective.push(cost);
        self.lower.push(lower);
        self.upper.push(upper);
        self.var_class.push(class);
        self.var_names.push(name.into());
        self.objective.len() - 1
    }

    pub fn add_row(&mut self, row: Row) {
        self.rows.push(row);
    }

    pub fn is_integer(&self, j: usize) -> bool {
        self.var_class[j].is_integer()
    }

    /// Indices of binary and general integer variables, ascending.
    pub fn integer_indices(&self) -> Vec<usize> {
        (0..self.num_vars()).filter(|&j| self.is_integer(j)).collect()
    }

    pub fn binary_indices(&self) -> Vec<usize> {
        (0..self.num_vars())
            .filter(|&j| self.var_class[j] == VarClass::Binary)
            .collect()
    }

    /// `(|B|, |G|, |C|)`.
    pub fn class_counts(&self) -> (usize, usize, usize) {
        self.var_class.iter().fold((0, 0, 0), |(b, g, c), class| match class {
            VarClass::Binary => (b + 1, g, c),
            VarClass::GeneralInteger => (b, g + 1, c),
            VarClass::Continuous => (b, g, c + 1),
        })
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.objective
            .iter()
            .zip(values)
            .map(|(c, x)| c * x)
            .sum::<f64>()
            + self.objective_constant
    }

    /// Checks the structural invariants of the model.
    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        for (what, len) in [
            ("lower bounds", self.lower.len()),
            ("upper bounds", self.upper.len()),
            ("variable classes", self.var_class.len()),
            ("variable names", self.var_names.len()),
        ] {
            if len != n {
                return Err(Error::InvalidInstance(format!("{what}: length {len}, expected {n}")));
            }
        }
        for j in 0..n {
            let (lo, hi) = (self.lower[j], self.upper[j]);
            if lo.is_nan() || hi.is_nan() || !self.objective[j].is_finite() {
                return Err(Error::InvalidInstance(format!("variable {} has non-finite data", self.var_names[j])));
            }
            match self.var_class[j] {
                VarClass::Binary if lo < 0.0 || hi > 1.0 => {
                    return Err(Error::InvalidInstance(format!(
                        "binary variable {} has bounds [{lo}, {hi}] outside [0, 1]",
                        self.var_names[j]
                    )));
                }
                VarClass::GeneralInteger if (lo.is_finite() && lo.fract() != 0.0) || (hi.is_finite() && hi.fract() != 0.0) => {
                    return Err(Error::InvalidInstance(format!(
                        "integer variable {} has fractional bounds [{lo}, {hi}]",
                        self.var_names[j]
                    )));
                }
                _ => {}
            }
        }
        for row in &self.rows {
            let mut seen = std::collections::HashSet::with_capacity(row.coefs.len());
            for &(j, a) in &row.coefs {
                if j >= n {
                    return Err(Error::InvalidInstance(format!("row {} references column {j} >= {n}", row.name)));
                }
                if !seen.insert(j) {
                    return Err(Error::InvalidInstance(format!("row {} repeats column {j}", row.name)));
                }
                if !a.is_finite() {
                    return Err(Error::InvalidInstance(format!("row {} has a non-finite coefficient", row.name)));
                }
            }
            if !row.rhs.is_finite() {
                return Err(Error::InvalidInstance(format!("row {} has a non-finite right-hand side", row.name)));
            }
        }
        Ok(())
    }
}

/// A candidate assignment with its objective and worst violation.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub values: Vec<f64>,
    pub objective: f64,
    /// Infinity norm over row, bound and integrality violations.
    pub max_violation: f64,
}

impl Solution {
    pub fn is_feasible(&self) -> bool {
        self.max_violation <= FEAS_TOL
    }
}

/// Objective and maximum violation of `values` in `instance`.
pub fn evaluate(instance: &ProblemInstance, values: &[f64]) -> Result<Solution> {
    let n = instance.num_vars();
    if values.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: values.len(),
        });
    }
    let mut worst = 0.0f64;
    for row in &instance.rows {
        worst = worst.max(row.violation(row.activity(values)));
    }
    for (j, &x) in values.iter().enumerate() {
        worst = worst.max(instance.lower[j] - x).max(x - instance.upper[j]);
        if instance.is_integer(j) {
            worst = worst.max((x - x.round()).abs());
        }
    }
    if values.iter().any(|x| x.is_nan()) {
        worst = f64::INFINITY;
    }
    Ok(Solution {
        values: values.to_vec(),
        objective: instance.objective_value(values),
        max_violation: worst,
    })
}

/// Distance of `x` to the nearest integer.
pub fn fractionality(x: f64) -> f64 {
    (x - x.round()).abs()
}

/// True when every integer variable of `point` is within `INT_TOL` of an integer.
pub fn is_integral(instance: &ProblemInstance, point: &[f64]) -> bool {
    (0..instance.num_vars()).all(|j| !instance.is_integer(j) || fractionality(point[j]) <= INT_TOL)
}

/// Binary Hamming distance between two points, over the binary variables.
pub fn binary_hamming(instance: &ProblemInstance, a: &[f64], b: &[f64]) -> usize {
    instance
        .binary_indices()
        .into_iter()
        .filter(|&j| (a[j] - b[j]).abs() > 0.5)
        .count()
}
