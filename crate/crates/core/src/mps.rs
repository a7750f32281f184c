//! # Reading MPS files
//!
//! Fixed and free MPS are both read by whitespace tokenization, so names must
//! not contain blanks. Gzip-compressed input is detected by its magic bytes.
//!
//! Conventions:
//! - a right-hand side on the objective row is stored as the objective
//!   constant with flipped sign, matching the usual solver reading;
//! - integer columns (between `INTORG`/`INTEND` markers) that receive no
//!   `BOUNDS` entry default to `[0, 1]`;
//! - ranged rows become two inequalities, `name` (`>=` the low side) and
//!   `name_rng` (`<=` the high side).
use std::collections::HashMap;
use std::io::Read;
use std::path::Path;

use flate2::read::GzDecoder;

use crate::error::{Error, Result};
use crate::model::{ProblemInstance, Relation, Row, Sense, VarClass};

/// Magnitudes at or above this value read as infinite.
const MPS_INFINITY: f64 = 1e30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    Start,
    Name,
    ObjSense,
    Rows,
    Columns,
    Rhs,
    Ranges,
    Bounds,
    End,
}

impl Section {
    fn from_keyword(word: &str) -> Option<Section> {
        Some(match word {
            "NAME" => Section::Name,
            "OBJSENSE" => Section::ObjSense,
            "ROWS" => Section::Rows,
            "COLUMNS" => Section::Columns,
            "RHS" => Section::Rhs,
            "RANGES" => Section::Ranges,
            "BOUNDS" => Section::Bounds,
            "ENDATA" => Section::End,
            _ => return None,
        })
    }
}

const UNSUPPORTED_SECTIONS: &[&str] = &[
    "SOS", "QUADOBJ", "QSECTION", "QMATRIX", "QCMATRIX", "CSECTION", "INDICATORS", "PWLOBJ", "PWLNAM", "GENCONS",
    "OBJSENSE_MULTI", "OBJNAME",
];

#[derive(Debug, Default)]
struct Column {
    name: String,
    cost: f64,
    entries: Vec<(usize, f64)>,
    marker_integer: bool,
    integer: bool,
    binary: bool,
    lower: Option<f64>,
    upper: Option<f64>,
    has_bound_entry: bool,
}

struct PendingRow {
    name: String,
    relation: Relation,
    rhs: f64,
    range: Option<f64>,
}

#[derive(Default)]
struct Reader {
    name: String,
    sense: Sense,
    objective_row: Option<String>,
    objective_constant: f64,
    rows: Vec<PendingRow>,
    row_index: HashMap<String, usize>,
    columns: Vec<Column>,
    column_index: HashMap<String, usize>,
    in_integer_block: bool,
}

enum RowRef {
    Objective,
    Constraint(usize),
}

impl Reader {
    fn row_ref(&self, name: &str, line: usize) -> Result<RowRef> {
        if self.objective_row.as_deref() == Some(name) {
            return Ok(RowRef::Objective);
        }
        self.row_index
            .get(name)
            .map(|&i| RowRef::Constraint(i))
            .ok_or_else(|| Error::parse(line, format!("unknown row '{name}'")))
    }

    fn column(&self, name: &str, line: usize) -> Result<usize> {
        self.column_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::parse(line, format!("unknown column '{name}'")))
    }

    fn rows_line(&mut self, tokens: &[&str], line: usize) -> Result<()> {
        let [kind, name] = tokens else {
            return Err(Error::parse(line, "ROWS entries need a type and a name"));
        };
        let relation = match kind.to_ascii_uppercase().as_str() {
            "N" => {
                if self.objective_row.is_some() {
                    return Err(Error::parse(line, format!("duplicate objective row '{name}'")));
                }
                self.objective_row = Some(name.to_string());
                return Ok(());
            }
            "L" => Relation::Le,
            "G" => Relation::Ge,
            "E" => Relation::Eq,
            other => return Err(Error::parse(line, format!("unknown row type '{other}'"))),
        };
        if self.row_index.contains_key(*name) || self.objective_row.as_deref() == Some(name) {
            return Err(Error::parse(line, format!("duplicate row '{name}'")));
        }
        self.row_index.insert(name.to_string(), self.rows.len());
        self.rows.push(PendingRow {
            name: name.to_string(),
            relation,
            rhs: 0.0,
            range: None,
        });
        Ok(())
    }

    fn columns_line(&mut self, tokens: &[&str], line: usize) -> Result<()> {
        if tokens.len() >= 3 && tokens[1].trim_matches('\'') == "MARKER" {
            match tokens[2].trim_matches('\'') {
                "INTORG" => self.in_integer_block = true,
                "INTEND" => self.in_integer_block = false,
                other => return Err(Error::parse(line, format!("unknown marker '{other}'"))),
            }
            return Ok(());
        }
        if tokens.len() != 3 && tokens.len() != 5 {
            return Err(Error::parse(line, "COLUMNS entries need a column and one or two row/value pairs"));
        }
        let col = match self.column_index.get(tokens[0]) {
            Some(&c) => c,
            None => {
                self.column_index.insert(tokens[0].to_string(), self.columns.len());
                self.columns.push(Column {
                    name: tokens[0].to_string(),
                    marker_integer: self.in_integer_block,
                    integer: self.in_integer_block,
                    ..Column::default()
                });
                self.columns.len() - 1
            }
        };
        for pair in tokens[1..].chunks(2) {
            let value = number(pair[1], line)?;
            match self.row_ref(pair[0], line)? {
                RowRef::Objective => self.columns[col].cost += value,
                RowRef::Constraint(i) => {
                    let entries = &mut self.columns[col].entries;
                    match entries.iter_mut().find(|(r, _)| *r == i) {
                        Some(entry) => entry.1 += value,
                        None => entries.push((i, value)),
                    }
                }
            }
        }
        Ok(())
    }

    /// RHS and RANGES share a layout: an optional set name, then pairs.
    fn pairs<'a>(tokens: &'a [&'a str], line: usize) -> Result<&'a [&'a str]> {
        let pairs = if tokens.len() % 2 == 1 { &tokens[1..] } else { tokens };
        if pairs.is_empty() || pairs.len() > 4 {
            return Err(Error::parse(line, "expected one or two name/value pairs"));
        }
        Ok(pairs)
    }

    fn rhs_line(&mut self, tokens: &[&str], line: usize) -> Result<()> {
        for pair in Self::pairs(tokens, line)?.chunks(2) {
            let value = number(pair[1], line)?;
            match self.row_ref(pair[0], line)? {
                RowRef::Objective => self.objective_constant = -value,
                RowRef::Constraint(i) => self.rows[i].rhs = value,
            }
        }
        Ok(())
    }

    fn ranges_line(&mut self, tokens: &[&str], line: usize) -> Result<()> {
        for pair in Self::pairs(tokens, line)?.chunks(2) {
            let value = number(pair[1], line)?;
            match self.row_ref(pair[0], line)? {
                RowRef::Objective => return Err(Error::parse(line, "RANGES entry on the objective row")),
                RowRef::Constraint(i) => self.rows[i].range = Some(value),
            }
        }
        Ok(())
    }

    fn bounds_line(&mut self, tokens: &[&str], line: usize) -> Result<()> {
        let kind = tokens[0].to_ascii_uppercase();
        let rest = &tokens[1..];
        let (col_name, value) = match kind.as_str() {
            "UP" | "LO" | "FX" | "LI" | "UI" => match rest {
                [_, c, v] | [c, v] => (*c, Some(number(v, line)?)),
                _ => return Err(Error::parse(line, format!("bound type {kind} needs a column and a value"))),
            },
            "FR" | "MI" | "PL" => match rest {
                [_, c] | [c] => (*c, None),
                _ => return Err(Error::parse(line, format!("bound type {kind} takes a column only"))),
            },
            "BV" => match rest {
                [c] => (*c, None),
                [_, c] if self.column_index.contains_key(*c) => (*c, None),
                [c, v] | [_, c, v] => (*c, Some(number(v, line)?)),
                _ => return Err(Error::parse(line, "malformed BV bound")),
            },
            "SC" => {
                return Err(Error::Unsupported {
                    line,
                    feature: "semicontinuous bound (SC)".into(),
                })
            }
            other => return Err(Error::parse(line, format!("unknown bound type '{other}'"))),
        };
        let j = self.column(col_name, line)?;
        let col = &mut self.columns[j];
        col.has_bound_entry = true;
        let v = value.map(infinite_clamp);
        match kind.as_str() {
            "UP" | "UI" => {
                let v = v.unwrap_or_default();
                if v < 0.0 && col.lower.is_none() {
                    col.lower = Some(f64::NEG_INFINITY);
                }
                col.upper = Some(v);
                col.integer |= kind == "UI";
            }
            "LO" | "LI" => {
                col.lower = v;
                col.integer |= kind == "LI";
            }
            "FX" => {
                col.lower = v;
                col.upper = v;
            }
            "FR" => {
                col.lower = Some(f64::NEG_INFINITY);
                col.upper = Some(f64::INFINITY);
            }
            "MI" => col.lower = Some(f64::NEG_INFINITY),
            "PL" => col.upper = Some(f64::INFINITY),
            "BV" => {
                col.integer = true;
                col.binary = true;
                col.lower = Some(0.0);
                col.upper = Some(1.0);
            }
            _ => unreachable!(),
        }
        Ok(())
    }

    fn finish(self) -> Result<ProblemInstance> {
        if self.objective_row.is_none() {
            return Err(Error::parse(0, "no objective (N) row"));
        }
        let n = self.columns.len();
        let mut inst = ProblemInstance::with_vars(self.name, 0);
        inst.sense = self.sense;
        let flip = if self.sense == Sense::Maximize { -1.0 } else { 1.0 };
        inst.objective_constant = flip * self.objective_constant;

        let mut row_coefs: Vec<Vec<(usize, f64)>> = vec![Vec::new(); self.rows.len()];
        for (j, col) in self.columns.into_iter().enumerate() {
            for &(i, a) in &col.entries {
                if a != 0.0 {
                    row_coefs[i].push((j, a));
                }
            }
            let mut lower = col.lower.unwrap_or(0.0);
            let default_upper = if col.marker_integer && !col.has_bound_entry { 1.0 } else { f64::INFINITY };
            let mut upper = col.upper.unwrap_or(default_upper);
            let class = if col.integer {
                lower = lower.ceil();
                upper = upper.floor();
                if col.binary || (lower == 0.0 && upper == 1.0) {
                    VarClass::Binary
                } else {
                    VarClass::GeneralInteger
                }
            } else {
                VarClass::Continuous
            };
            inst.add_var(col.name, class, lower, upper, flip * col.cost);
        }
        debug_assert_eq!(inst.num_vars(), n);

        for (row, coefs) in self.rows.into_iter().zip(row_coefs) {
            match row.range {
                Some(r) if r != 0.0 || row.relation != Relation::Eq => {
                    let (lo, hi) = match row.relation {
                        Relation::Le => (row.rhs - r.abs(), row.rhs),
                        Relation::Ge => (row.rhs, row.rhs + r.abs()),
                        Relation::Eq if r > 0.0 => (row.rhs, row.rhs + r),
                        Relation::Eq => (row.rhs + r, row.rhs),
                    };
                    inst.add_row(Row::new(row.name.clone(), coefs.clone(), Relation::Ge, lo));
                    inst.add_row(Row::new(format!("{}_rng", row.name), coefs, Relation::Le, hi));
                }
                _ => inst.add_row(Row::new(row.name, coefs, row.relation, row.rhs)),
            }
        }
        inst.validate()?;
        Ok(inst)
    }
}

fn number(token: &str, line: usize) -> Result<f64> {
    token
        .parse::<f64>()
        .map_err(|_| Error::parse(line, format!("'{token}' is not a number")))
}

fn infinite_clamp(v: f64) -> f64 {
    if v >= MPS_INFINITY {
        f64::INFINITY
    } else if v <= -MPS_INFINITY {
        f64::NEG_INFINITY
    } else {
        v
    }
}

fn parse_sense(word: &str, line: usize) -> Result<Sense> {
    match word.to_ascii_uppercase().as_str() {
        "MIN" | "MINIMIZE" | "MINIMISE" => Ok(Sense::Minimize),
        "MAX" | "MAXIMIZE" | "MAXIMISE" => Ok(Sense::Maximize),
        other => Err(Error::parse(line, format!("unknown objective sense '{other}'"))),
    }
}

/// Parses MPS text (fixed or free format).
pub fn parse_mps(text: &str) -> Result<ProblemInstance> {
    let mut reader = Reader::default();
    let mut section = Section::Start;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.starts_with('*') || raw.trim().is_empty() {
            continue;
        }
        let tokens: Vec<&str> = raw.split_whitespace().collect();
        let indented = raw.starts_with(char::is_whitespace);

        if !indented {
            if let Some(next) = Section::from_keyword(tokens[0]) {
                let ok = match next {
                    Section::Name => section == Section::Start,
                    Section::ObjSense => section < Section::ObjSense,
                    Section::Rows => section < Section::Rows,
                    Section::Columns => section == Section::Rows,
                    _ => next > section && section >= Section::Columns,
                };
                if !ok {
                    return Err(Error::parse(line, format!("section {} out of order", tokens[0])));
                }
                section = next;
                match next {
                    Section::Name => reader.name = tokens.get(1).copied().unwrap_or_default().to_string(),
                    Section::ObjSense if tokens.len() > 1 => reader.sense = parse_sense(tokens[1], line)?,
                    Section::End => return reader.finish(),
                    _ => {}
                }
                continue;
            }
            if UNSUPPORTED_SECTIONS.contains(&tokens[0]) {
                return Err(Error::Unsupported {
                    line,
                    feature: format!("{} section", tokens[0]),
                });
            }
        }

        match section {
            Section::Start | Section::Name => {
                return Err(Error::parse(line, "data line before the ROWS section"));
            }
            Section::ObjSense => reader.sense = parse_sense(tokens[0], line)?,
            Section::Rows => reader.rows_line(&tokens, line)?,
            Section::Columns => reader.columns_line(&tokens, line)?,
            Section::Rhs => reader.rhs_line(&tokens, line)?,
            Section::Ranges => reader.ranges_line(&tokens, line)?,
            Section::Bounds => reader.bounds_line(&tokens, line)?,
            Section::End => unreachable!(),
        }
    }
    Err(Error::parse(text.lines().count(), "missing ENDATA"))
}

/// Parses MPS from raw bytes, inflating gzip input first.
pub fn parse_mps_bytes(bytes: &[u8]) -> Result<ProblemInstance> {
    let text = if bytes.starts_with(&[0x1f, 0x8b]) {
        let mut out = String::new();
        GzDecoder::new(bytes).read_to_string(&mut out)?;
        out
    } else {
        String::from_utf8(bytes.to_vec()).map_err(|e| Error::parse(0, format!("input is not UTF-8: {e}")))?
    };
    parse_mps(&text)
}

/// Reads an `.mps` or `.mps.gz` file.
pub fn read_instance(path: impl AsRef<Path>) -> Result<ProblemInstance> {
    let bytes = std::fs::read(path)?;
    parse_mps_bytes(&bytes)
}
