//! Instance generators and brute-force oracles shared by the integration tests.
//! Nothing here calls into the solver paths being checked.
#![allow(dead_code)]

use poutine::model::{ProblemInstance, Relation, Row, VarClass};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SUITE_SIZE: u64 = 50;
const MAX_ENUMERATION: u64 = 20_000;

/// Random pure-integer MILP: 4..=12 integer variables, 2..=8 rows, integer
/// coefficients in [-10, 10]. A hidden random point is feasible by construction.
pub fn suite_instance(seed: u64) -> ProblemInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + seed);
    let n = rng.gen_range(4..=12);
    let mut inst = ProblemInstance::with_vars(format!("suite{seed:02}"), 0);
    let mut domain: u64 = 1;
    for j in 0..n {
        let general = rng.gen_bool(0.3);
        let (lo, hi) = if rng.gen_bool(0.5) { (0.0, 2.0) } else { (-1.0, 2.0) };
        let size = (hi - lo) as u64 + 1;
        let cost = rng.gen_range(-10..=10) as f64;
        if general && domain * size <= MAX_ENUMERATION / 2u64.pow((n - j - 1) as u32) {
            domain *= size;
            inst.add_var(format!("g{j}"), VarClass::GeneralInteger, lo, hi, cost);
        } else {
            domain *= 2;
            inst.add_var(format!("b{j}"), VarClass::Binary, 0.0, 1.0, cost);
        }
    }
    let hidden: Vec<f64> = (0..n)
        .map(|j| rng.gen_range(inst.lower[j] as i64..=inst.upper[j] as i64) as f64)
        .collect();
    let m = rng.gen_range(2..=8);
    for i in 0..m {
        let mut coefs = Vec::new();
        for j in 0..n {
            if rng.gen_bool(0.6) {
                let mut a = rng.gen_range(-10..=10);
                if a == 0 {
                    a = 1;
                }
                coefs.push((j, a as f64));
            }
        }
        if coefs.len() < 2 {
            coefs = vec![(0, rng.gen_range(1..=10) as f64), (n - 1, rng.gen_range(-10..=-1) as f64)];
        }
        let act: f64 = coefs.iter().map(|&(j, a)| a * hidden[j]).sum();
        let slack = rng.gen_range(0..=6) as f64;
        let (relation, rhs) = match rng.gen_range(0..20) {
            0..=8 => (Relation::Le, act + slack),
            9..=17 => (Relation::Ge, act - slack),
            _ => (Relation::Eq, act),
        };
        inst.add_row(Row::new(format!("r{i}"), coefs, relation, rhs));
    }
    inst.validate().unwrap();
    inst
}

pub fn suite() -> Vec<ProblemInstance> {
    (0..SUITE_SIZE).map(suite_instance).collect()
}

/// Random MILP over binaries, small general integers and bounded continuous
/// variables; feasible by construction. Used for soundness checks where the
/// checker is `evaluate`, not an enumeration.
pub fn mixed_instance(seed: u64) -> ProblemInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(0xabcd_0000 + seed);
    let n = rng.gen_range(3..=10);
    let mut inst = ProblemInstance::with_vars(format!("mixed{seed}"), 0);
    for j in 0..n {
        let cost = rng.gen_range(-10..=10) as f64;
        match rng.gen_range(0..6) {
            0..=2 => inst.add_var(format!("b{j}"), VarClass::Binary, 0.0, 1.0, cost),
            3 => inst.add_var(format!("g{j}"), VarClass::GeneralInteger, -2.0, 4.0, cost),
            _ => inst.add_var(format!("c{j}"), VarClass::Continuous, 0.0, rng.gen_range(1..=5) as f64, cost),
        };
    }
    let hidden: Vec<f64> = (0..n)
        .map(|j| {
            if inst.is_integer(j) {
                rng.gen_range(inst.lower[j] as i64..=inst.upper[j] as i64) as f64
            } else {
                rng.gen_range(inst.lower[j]..=inst.upper[j])
            }
        })
        .collect();
    for i in 0..rng.gen_range(1..=6) {
        let mut coefs: Vec<(usize, f64)> = Vec::new();
        for j in 0..n {
            let a = rng.gen_range(-10..=10) as f64;
            if rng.gen_bool(0.6) && a != 0.0 {
                coefs.push((j, a));
            }
        }
        if coefs.is_empty() {
            continue;
        }
        let act: f64 = coefs.iter().map(|&(j, a)| a * hidden[j]).sum();
        let slack = rng.gen_range(0.0..4.0);
        let (relation, rhs) = if rng.gen_bool(0.5) {
            (Relation::Le, (act + slack).ceil())
        } else {
            (Relation::Ge, (act - slack).floor())
        };
        inst.add_row(Row::new(format!("r{i}"), coefs, relation, rhs));
    }
    inst.validate().unwrap();
    inst
}

/// Row/bound/integrality check written independently of `evaluate`.
pub fn oracle_feasible(inst: &ProblemInstance, x: &[f64], tol: f64) -> bool {
    for (j, &v) in x.iter().enumerate() {
        if v < inst.lower[j] - tol || v > inst.upper[j] + tol {
            return false;
        }
        if inst.var_class[j] != VarClass::Continuous && (v - v.round()).abs() > tol {
            return false;
        }
    }
    inst.rows.iter().all(|row| {
        let act: f64 = row.coefs.iter().map(|&(j, a)| a * x[j]).sum();
        match row.relation {
            Relation::Le => act <= row.rhs + tol,
            Relation::Ge => act >= row.rhs - tol,
            Relation::Eq => (act - row.rhs).abs() <= tol,
        }
    })
}

pub fn oracle_objective(inst: &ProblemInstance, x: &[f64]) -> f64 {
    inst.objective.iter().zip(x).map(|(c, v)| c * v).sum::<f64>() + inst.objective_constant
}

/// Every integer assignment of a pure-integer instance with finite bounds.
pub fn enumerate_points(inst: &ProblemInstance) -> Vec<Vec<f64>> {
    assert!(inst.var_class.iter().all(|c| *c != VarClass::Continuous), "pure integer only");
    let ranges: Vec<(i64, i64)> = (0..inst.num_vars())
        .map(|j| (inst.lower[j] as i64, inst.upper[j] as i64))
        .collect();
    let mut out = Vec::new();
    let mut cur: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    if ranges.iter().any(|(lo, hi)| lo > hi) {
        return out;
    }
    loop {
        out.push(cur.iter().map(|&v| v as f64).collect());
        let mut k = 0;
        loop {
            if k == cur.len() {
                return out;
            }
            if cur[k] < ranges[k].1 {
                cur[k] += 1;
                break;
            }
            cur[k] = ranges[k].0;
            k += 1;
        }
    }
}

/// Exact optimum by enumeration: `(objective, argmin)`, `None` if infeasible.
pub fn brute_force(inst: &ProblemInstance) -> Option<(f64, Vec<f64>)> {
    let mut best: Option<(f64, Vec<f64>)> = None;
    for x in enumerate_points(inst) {
        if oracle_feasible(inst, &x, 1e-9) {
            let z = oracle_objective(inst, &x);
            if best.as_ref().is_none_or(|(b, _)| z < *b) {
                best = Some((z, x));
            }
        }
    }
    best
}

/// Brute-force LP optimum of `min c x, A x (rel) b, lo <= x <= hi` with finite
/// bounds: try every choice of `n` tight constraints among rows and bounds,
/// solve the square system, keep the best feasible vertex.
pub fn lp_vertex_oracle(inst: &ProblemInstance) -> Option<f64> {
    let n = inst.num_vars();
    let mut planes: Vec<(Vec<f64>, f64)> = Vec::new();
    for row in &inst.rows {
        let mut a = vec![0.0; n];
        for &(j, v) in &row.coefs {
            a[j] = v;
        }
        planes.push((a, row.rhs));
    }
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        planes.push((e.clone(), inst.lower[j]));
        planes.push((e, inst.upper[j]));
    }
    let mut best: Option<f64> = None;
    let mut choice: Vec<usize> = (0..n).collect();
    loop {
        let a: Vec<Vec<f64>> = choice.iter().map(|&k| planes[k].0.clone()).collect();
        let b: Vec<f64> = choice.iter().map(|&k| planes[k].1).collect();
        if let Some(x) = gauss_solve(a, b) {
            if lp_feasible(inst, &x, 1e-7) {
                let z = oracle_objective(inst, &x);
                best = Some(best.map_or(z, |v: f64| v.min(z)));
            }
        }
        // next combination
        let p = planes.len();
        let mut i = n;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if choice[i] < p - n + i {
                choice[i] += 1;
                for k in i + 1..n {
                    choice[k] = choice[k - 1] + 1;
                }
                break;
            }
        }
    }
}

fn lp_feasible(inst: &ProblemInstance, x: &[f64], tol: f64) -> bool {
    (0..inst.num_vars()).all(|j| x[j] >= inst.lower[j] - tol && x[j] <= inst.upper[j] + tol)
        && inst.rows.iter().all(|row| {
            let act: f64 = row.coefs.iter().map(|&(j, a)| a * x[j]).sum();
            match row.relation {
                Relation::Le => act <= row.rhs + tol,
                Relation::Ge => act >= row.rhs - tol,
                Relation::Eq => (act - row.rhs).abs() <= tol,
            }
        })
}

fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &k| a[i][c].abs().total_cmp(&a[k][c].abs()))?;
        if a[p][c].abs() < 1e-10 {
            return None;
        }
        a.swap(p, c);
        b.swap(p, c);
        for i in c + 1..n {
            let f = a[i][c] / a[c][c];
            for k in c..n {
                a[i][k] -= f * a[c][k];
            }
            b[i] -= f * b[c];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Some(x)
}

/// All feasible points of a pure-integer instance, by enumeration.
pub fn feasible_points(inst: &ProblemInstance) -> Vec<Vec<f64>> {
    enumerate_points(inst)
        .into_iter()
        .filter(|x| oracle_feasible(inst, x, 1e-9))
        .collect()
}

/// Random pure-binary instance with `n` variables, feasible by construction.
pub fn binary_instance(seed: u64, n: usize) -> ProblemInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(0xb1a7_0000 + seed);
    let mut inst = ProblemInstance::with_vars(format!("bin{seed}"), 0);
    for j in 0..n {
        inst.add_var(format!("x{j}"), VarClass::Binary, 0.0, 1.0, rng.gen_range(-10..=10) as f64);
    }
    let hidden: Vec<f64> = (0..n).map(|_| rng.gen_range(0..=1) as f64).collect();
    for i in 0..rng.gen_range(1..=4) {
        let coefs: Vec<(usize, f64)> = (0..n)
            .filter_map(|j| {
                let a = rng.gen_range(-10..=10);
                (a != 0).then_some((j, a as f64))
            })
            .collect();
        let act: f64 = coefs.iter().map(|&(j, a)| a * hidden[j]).sum();
        let slack = rng.gen_range(0..=8) as f64;
        let (relation, rhs) = if rng.gen_bool(0.5) {
            (Relation::Le, act + slack)
        } else {
            (Relation::Ge, act - slack)
        };
        inst.add_row(Row::new(format!("r{i}"), coefs, relation, rhs));
    }
    inst
}

pub fn hamming(a: &[f64], b: &[f64], indices: &[usize]) -> usize {
    indices.iter().filter(|&&j| (a[j] - b[j]).abs() > 0.5).count()
}

/// Free-format MPS text for a minimization instance with finite bounds.
pub fn write_mps(inst: &ProblemInstance) -> String {
    use std::fmt::Write;
    let mut out = format!("NAME {}\nROWS\n N obj\n", inst.name);
    for row in &inst.rows {
        let t = match row.relation {
            Relation::Le => "L",
            Relation::Ge => "G",
            Relation::Eq => "E",
        };
        writeln!(out, " {t} {}", row.name).unwrap();
    }
    out.push_str("COLUMNS\n");
    let mut in_int = false;
    for j in 0..inst.num_vars() {
        let int = inst.var_class[j] != VarClass::Continuous;
        if int != in_int {
            let tag = if int { "INTORG" } else { "INTEND" };
            writeln!(out, " M MARKER {tag}").unwrap();
            in_int = int;
        }
        let name = &inst.var_names[j];
        writeln!(out, " {name} obj {}", inst.objective[j]).unwrap();
        for row in &inst.rows {
            for &(k, a) in &row.coefs {
                if k == j {
                    writeln!(out, " {name} {} {a}", row.name).unwrap();
                }
            }
        }
    }
    if in_int {
        out.push_str(" M MARKER INTEND\n");
    }
    out.push_str("RHS\n");
    for row in &inst.rows {
        writeln!(out, " RHS {} {}", row.name, row.rhs).unwrap();
    }
    out.push_str("BOUNDS\n");
    for j in 0..inst.num_vars() {
        let name = &inst.var_names[j];
        if inst.var_class[j] == VarClass::Binary {
            writeln!(out, " BV BND {name}").unwrap();
        } else {
            writeln!(out, " LO BND {name} {}", inst.lower[j]).unwrap();
            writeln!(out, " UP BND {name} {}", inst.upper[j]).unwrap();
        }
    }
    out.push_str("ENDATA\n");
    out
}
