//! MPS reader (fixed or free format, whitespace separated).
//!
//! Supported sections: `NAME`, `OBJSENSE`, `ROWS`, `COLUMNS` (with
//! `INTORG`/`INTEND` markers), `RHS`, `BOUNDS`, `ENDATA`. `RANGES` is
//! rejected. Names must not contain spaces.

use std::collections::HashMap;

use crate::lp::{Row, Sense};

use super::problem::{MilpProblem, ObjSense};
use super::{ModelError, ParseError, ParseErrorKind};

/// Magnitudes at or above this are read as infinite bounds.
const MPS_INFINITY: f64 = 1e30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Start,
    ObjSense,
    Rows,
    Columns,
    Rhs,
    Bounds,
}

enum RowKind {
    Objective,
    Constraint(usize),
    /// Additional free rows are ignored.
    Ignored,
}

struct Builder {
    name: String,
    sense: ObjSense,
    objective_row: Option<String>,
    row_index: HashMap<String, RowKind>,
    row_names: Vec<String>,
    row_senses: Vec<Sense>,
    rhs: Vec<f64>,
    row_coefs: Vec<Vec<(usize, f64)>>,
    col_index: HashMap<String, usize>,
    col_names: Vec<String>,
    objective: Vec<f64>,
    integral: Vec<bool>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    /// Set once an explicit bound has been given (affects the negative
    /// `UP` convention).
    lower_set: Vec<bool>,
    offset: f64,
    in_integer_block: bool,
    last_col: Option<usize>,
}

fn err(line: usize, kind: ParseErrorKind) -> ModelError {
    ModelError::Parse(ParseError { line, kind })
}

fn number(tok: &str, line: usize) -> Result<f64, ModelError> {
    let v: f64 = tok
        .parse()
        .map_err(|_| err(line, ParseErrorKind::BadNumber(tok.to_string())))?;
    if v.is_nan() || (v.is_infinite() && !tok.to_ascii_lowercase().contains("inf")) {
        return Err(err(line, ParseErrorKind::BadNumber(tok.to_string())));
    }
    Ok(v)
}

fn finite(tok: &str, line: usize) -> Result<f64, ModelError> {
    let v = number(tok, line)?;
    if !v.is_finite() {
        return Err(err(line, ParseErrorKind::BadNumber(tok.to_string())));
    }
    Ok(v)
}

impl Builder {
    fn new() -> Self {
        Self {
            name: String::new(),
            sense: ObjSense::Min,
            objective_row: None,
            row_index: HashMap::new(),
            row_names: Vec::new(),
            row_senses: Vec::new(),
            rhs: Vec::new(),
            row_coefs: Vec::new(),
            col_index: HashMap::new(),
            col_names: Vec::new(),
            objective: Vec::new(),
            integral: Vec::new(),
            lower: Vec::new(),
            upper: Vec::new(),
            lower_set: Vec::new(),
            offset: 0.0,
            in_integer_block: false,
            last_col: None,
        }
    }

    fn add_row(&mut self, tokens: &[&str], line: usize) -> Result<(), ModelError> {
        let [kind, name] = tokens else {
            return Err(err(line, ParseErrorKind::FieldCount(tokens.len())));
        };
        if self.row_index.contains_key(*name) {
            return Err(err(line, ParseErrorKind::DuplicateRow(name.to_string())));
        }
        let entry = match kind.to_ascii_uppercase().as_str() {
            "N" => {
                if self.objective_row.is_none() {
                    self.objective_row = Some(name.to_string());
                    RowKind::Objective
                } else {
                    RowKind::Ignored
                }
            }
            k @ ("G" | "L" | "E") => {
                let sense = match k {
                    "G" => Sense::Ge,
                    "L" => Sense::Le,
                    _ => Sense::Eq,
                };
                let i = self.row_names.len();
                self.row_names.push(name.to_string());
                self.row_senses.push(sense);
                self.rhs.push(0.0);
                self.row_coefs.push(Vec::new());
                RowKind::Constraint(i)
            }
            other => return Err(err(line, ParseErrorKind::BadRowType(other.to_string()))),
        };
        self.row_index.insert(name.to_string(), entry);
        Ok(())
    }

    fn column_entry(&mut self, tokens: &[&str], line: usize) -> Result<(), ModelError> {
        if tokens.len() >= 3 && tokens[1].trim_matches('\'').eq_ignore_ascii_case("MARKER") {
            let marker = tokens[2].trim_matches('\'').to_ascii_uppercase();
            match marker.as_str() {
                "INTORG" => self.in_integer_block = true,
                "INTEND" => self.in_integer_block = false,
                _ => return Err(err(line, ParseErrorKind::BadMarker(marker))),
            }
            return Ok(());
        }
        if tokens.len() != 3 && tokens.len() != 5 {
            return Err(err(line, ParseErrorKind::FieldCount(tokens.len())));
        }
        let col = tokens[0];
        let j = match self.col_index.get(col) {
            Some(&j) if self.last_col == Some(j) => j,
            Some(_) => return Err(err(line, ParseErrorKind::DuplicateColumn(col.to_string()))),
            None => {
                let j = self.col_names.len();
                self.col_index.insert(col.to_string(), j);
                self.col_names.push(col.to_string());
                self.objective.push(0.0);
                self.integral.push(self.in_integer_block);
                self.lower.push(0.0);
                self.upper.push(f64::INFINITY);
                self.lower_set.push(false);
                self.last_col = Some(j);
                j
            }
        };
        for pair in tokens[1..].chunks(2) {
            let value = finite(pair[1], line)?;
            match self.row_index.get(pair[0]) {
                Some(RowKind::Objective) => self.objective[j] += value,
                Some(RowKind::Constraint(i)) => self.row_coefs[*i].push((j, value)),
                Some(RowKind::Ignored) => {}
                None => return Err(err(line, ParseErrorKind::UnknownRow(pair[0].to_string()))),
            }
        }
        Ok(())
    }

    fn rhs_entry(&mut self, tokens: &[&str], line: usize) -> Result<(), ModelError> {
        let pairs = match tokens.len() {
            2 | 4 => tokens,
            3 | 5 => &tokens[1..],
            n => return Err(err(line, ParseErrorKind::FieldCount(n))),
        };
        for pair in pairs.chunks(2) {
            let value = finite(pair[1], line)?;
            match self.row_index.get(pair[0]) {
                Some(RowKind::Objective) => self.offset = -value,
                Some(RowKind::Constraint(i)) => self.rhs[*i] = value,
                Some(RowKind::Ignored) => {}
                None => return Err(err(line, ParseErrorKind::UnknownRow(pair[0].to_string()))),
            }
        }
        Ok(())
    }

    fn bound_entry(&mut self, tokens: &[&str], line: usize) -> Result<(), ModelError> {
        if tokens.len() < 2 || tokens.len() > 4 {
            return Err(err(line, ParseErrorKind::FieldCount(tokens.len())));
        }
        let kind = tokens[0].to_ascii_uppercase();
        let needs_value = matches!(kind.as_str(), "UP" | "LO" | "FX" | "LI" | "UI");
        let (col, value) = if needs_value {
            if tokens.len() < 3 {
                return Err(err(line, ParseErrorKind::FieldCount(tokens.len())));
            }
            let v = number(tokens[tokens.len() - 1], line)?;
            (tokens[tokens.len() - 2], Some(v))
        } else if self.col_index.contains_key(tokens[tokens.len() - 1]) {
            (tokens[tokens.len() - 1], None)
        } else if tokens.len() >= 3 {
            // trailing value on a valueless bound type is ignored, but must
            // still be numeric
            number(tokens[tokens.len() - 1], line)?;
            (tokens[tokens.len() - 2], None)
        } else {
            return Err(err(
                line,
                ParseErrorKind::UnknownColumn(tokens[1].to_string()),
            ));
        };
        let j = *self
            .col_index
            .get(col)
            .ok_or_else(|| err(line, ParseErrorKind::UnknownColumn(col.to_string())))?;
        let clamp = |v: f64| {
            if v >= MPS_INFINITY {
                f64::INFINITY
            } else if v <= -MPS_INFINITY {
                f64::NEG_INFINITY
            } else {
                v
            }
        };
        match kind.as_str() {
            "UP" | "UI" => {
                let v = clamp(value.unwrap());
                self.upper[j] = v;
                if v < 0.0 && !self.lower_set[j] && self.lower[j] == 0.0 {
                    self.lower[j] = f64::NEG_INFINITY;
                }
                if kind == "UI" {
                    self.integral[j] = true;
                }
            }
            "LO" | "LI" => {
                self.lower[j] = clamp(value.unwrap());
                self.lower_set[j] = true;
                if kind == "LI" {
                    self.integral[j] = true;
                }
            }
            "FX" => {
                let v = value.unwrap();
                if !v.is_finite() {
                    return Err(err(
                        line,
                        ParseErrorKind::BadNumber(tokens[tokens.len() - 1].into()),
                    ));
                }
                self.lower[j] = v;
                self.upper[j] = v;
                self.lower_set[j] = true;
            }
            "FR" => {
                self.lower[j] = f64::NEG_INFINITY;
                self.upper[j] = f64::INFINITY;
                self.lower_set[j] = true;
            }
            "MI" => {
                self.lower[j] = f64::NEG_INFINITY;
                self.lower_set[j] = true;
            }
            "PL" => self.upper[j] = f64::INFINITY,
            "BV" => {
                self.lower[j] = 0.0;
                self.upper[j] = 1.0;
                self.lower_set[j] = true;
                self.integral[j] = true;
            }
            other => return Err(err(line, ParseErrorKind::BadBoundType(other.to_string()))),
        }
        if self.lower[j] == f64::INFINITY || self.upper[j] == f64::NEG_INFINITY {
            return Err(err(
                line,
                ParseErrorKind::BadNumber(tokens[tokens.len() - 1].into()),
            ));
        }
        Ok(())
    }

    fn finish(self) -> Result<MilpProblem, ModelError> {
        if self.col_names.is_empty() {
            return Err(ModelError::Empty);
        }
        let rows = self
            .row_coefs
            .into_iter()
            .zip(self.row_senses)
            .zip(self.rhs)
            .map(|((coefs, sense), rhs)| Row::new(coefs, sense, rhs))
            .collect();
        MilpProblem::with_names(
            self.name,
            self.sense,
            self.objective,
            rows,
            self.lower,
            self.upper,
            self.integral,
            self.col_names,
            self.row_names,
            self.offset,
        )
    }
}

fn parse_sense(tok: &str, line: usize) -> Result<ObjSense, ModelError> {
    match tok.to_ascii_uppercase().as_str() {
        "MAX" | "MAXIMIZE" => Ok(ObjSense::Max),
        "MIN" | "MINIMIZE" => Ok(ObjSense::Min),
        other => Err(err(line, ParseErrorKind::BadObjSense(other.to_string()))),
    }
}

/// Parses MPS text into a problem.
pub fn parse_mps(text: &str) -> Result<MilpProblem, ModelError> {
    let mut b = Builder::new();
    let mut section = Section::Start;
    let mut ended = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.trim().is_empty() || raw.starts_with('*') {
            continue;
        }
        let tokens: Vec<&str> = raw.split_whitespace().collect();
        let is_header = !raw.starts_with(|c: char| c.is_whitespace());
        if is_header {
            let head = tokens[0].to_ascii_uppercase();
            section = match head.as_str() {
                "NAME" => {
                    b.name = tokens[1..].join(" ");
                    Section::Start
                }
                "OBJSENSE" => {
                    if let Some(tok) = tokens.get(1) {
                        b.sense = parse_sense(tok, line)?;
                        Section::Start
                    } else {
                        Section::ObjSense
                    }
                }
                "ROWS" => Section::Rows,
                "COLUMNS" => Section::Columns,
                "RHS" => Section::Rhs,
                "BOUNDS" => Section::Bounds,
                "RANGES" => return Err(err(line, ParseErrorKind::RangesUnsupported)),
                "ENDATA" => {
                    ended = true;
                    break;
                }
                _ => {
                    return Err(err(
                        line,
                        ParseErrorKind::UnknownSection(tokens[0].to_string()),
                    ))
                }
            };
            continue;
        }
        match section {
            Section::Start => return Err(err(line, ParseErrorKind::DataOutsideSection)),
            Section::ObjSense => {
                b.sense = parse_sense(tokens[0], line)?;
                section = Section::Start;
            }
            Section::Rows => b.add_row(&tokens, line)?,
            Section::Columns => b.column_entry(&tokens, line)?,
            Section::Rhs => b.rhs_entry(&tokens, line)?,
            Section::Bounds => b.bound_entry(&tokens, line)?,
        }
    }
    if !ended {
        return Err(err(
            text.lines().count().max(1),
            ParseErrorKind::MissingEndata,
        ));
    }
    b.finish()
}
