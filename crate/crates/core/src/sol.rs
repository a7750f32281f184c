//! MIPLIB-style `.sol` files: an `=obj= <value>` line followed by one
//! `<name> <value>` line per variable.
use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{ProblemInstance, Sense, Solution};

fn clean_zero(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v
    }
}

/// Objective in the direction of the original input.
pub fn reported_objective(instance: &ProblemInstance, objective: f64) -> f64 {
    match instance.sense {
        Sense::Minimize => objective,
        Sense::Maximize => -objective,
    }
}

/// Renders `solution` for `instance`. Integer variables print as integers;
/// continuous values print in shortest round-trip form.
pub fn write_sol(solution: &Solution, instance: &ProblemInstance) -> String {
    let mut out = String::with_capacity(16 * (instance.num_vars() + 1));
    let obj = clean_zero(reported_objective(instance, solution.objective));
    let _ = writeln!(out, "=obj= {obj}");
    for (j, &v) in solution.values.iter().enumerate() {
        if instance.is_integer(j) {
            let _ = writeln!(out, "{} {}", instance.var_names[j], v.round() as i64);
        } else {
            let _ = writeln!(out, "{} {}", instance.var_names[j], clean_zero(v));
        }
    }
    out
}

/// Contents of a parsed `.sol` file.
#[derive(Debug, Clone, PartialEq)]
pub struct SolFile {
    /// The `=obj=` value as written, in the original objective direction.
    pub objective: Option<f64>,
    /// Dense values; variables not listed are zero.
    pub values: Vec<f64>,
}

pub fn read_sol(text: &str, instance: &ProblemInstance) -> Result<SolFile> {
    let index: HashMap<&str, usize> = instance
        .var_names
        .iter()
        .enumerate()
        .map(|(j, name)| (name.as_str(), j))
        .collect();
    let mut values = vec![0.0; instance.num_vars()];
    let mut objective = None;
    for (idx, line) in text.lines().enumerate() {
        let mut tokens = line.split_whitespace();
        let (Some(name), Some(value)) = (tokens.next(), tokens.next()) else {
            continue;
        };
        let value: f64 = value
            .parse()
            .map_err(|_| Error::Solution(format!("line {}: '{value}' is not a number", idx + 1)))?;
        if name == "=obj=" {
            objective = Some(value);
            continue;
        }
        let j = index
            .get(name)
            .ok_or_else(|| Error::Solution(format!("line {}: unknown variable '{name}'", idx + 1)))?;
        values[*j] = value;
    }
    Ok(SolFile { objective, values })
}

pub fn read_sol_file(path: impl AsRef<Path>, instance: &ProblemInstance) -> Result<SolFile> {
    read_sol(&std::fs::read_to_string(path)?, instance)
}

/// Writes `contents` to `path` through a temporary sibling and a rename, so
/// readers never observe a partial file.
pub fn write_atomically(path: &Path, contents: &str) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}
