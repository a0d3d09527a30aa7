//! Problem instances: the MILP type, readers for MPS and the instance JSON
//! schema, and a seeded generator for small test instances.

mod json;
mod mps;
mod problem;
mod random;

use std::fmt;
use std::path::Path;

use thiserror::Error;

pub use json::{parse_json, to_json};
pub use mps::parse_mps;
pub use problem::{MilpProblem, ObjSense};
pub use random::{generate_random, RandomProfile};

use crate::lp::LpError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    BadNumber(String),
    FieldCount(usize),
    UnknownSection(String),
    DuplicateRow(String),
    DuplicateColumn(String),
    UnknownRow(String),
    UnknownColumn(String),
    BadRowType(String),
    BadBoundType(String),
    BadMarker(String),
    BadObjSense(String),
    RangesUnsupported,
    DataOutsideSection,
    MissingEndata,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ParseErrorKind::*;
        match self {
            BadNumber(t) => write!(f, "invalid number {t:?}"),
            FieldCount(n) => write!(f, "unexpected number of fields ({n})"),
            UnknownSection(s) => write!(f, "unknown section {s:?}"),
            DuplicateRow(r) => write!(f, "duplicate row {r:?}"),
            DuplicateColumn(c) => write!(f, "duplicate or non-contiguous column {c:?}"),
            UnknownRow(r) => write!(f, "unknown row {r:?}"),
            UnknownColumn(c) => write!(f, "unknown column {c:?}"),
            BadRowType(t) => write!(f, "invalid row type {t:?}"),
            BadBoundType(t) => write!(f, "invalid bound type {t:?}"),
            BadMarker(m) => write!(f, "invalid marker {m:?}"),
            BadObjSense(s) => write!(f, "invalid objective sense {s:?}"),
            RangesUnsupported => write!(f, "RANGES section is not supported"),
            DataOutsideSection => write!(f, "data line outside of a section"),
            MissingEndata => write!(f, "missing ENDATA"),
        }
    }
}

/// A located MPS syntax error.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("instance JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("problem has no variables")]
    Empty,
    #[error("invalid problem: {0}")]
    Invalid(String),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// Reads an instance, choosing the format from the file extension
/// (`.json` or MPS otherwise).
pub fn read_problem(path: impl AsRef<Path>) -> Result<MilpProblem, ModelError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ModelError::Io {
        path: path.display().to_string(),
        source,
    })?;
    if path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"))
    {
        parse_json(&text)
    } else {
        parse_mps(&text)
    }
}

/// The three-binary example whose classic depth-first tree is maximal:
///
/// ```text
/// min  x1 - 2x2 - 6x3
///      -3x1 - 4x2 - 2x3 >= -8
///       3x1 - 4x2 - 2x3 >= -5
///      -3x1 + 4x2 - 2x3 >= -4
///       3x1 + 4x2 - 2x3 >= -1
///      x binary
/// ```
pub fn example_problem() -> MilpProblem {
    use crate::lp::{Row, Sense};
    let rows = vec![
        Row::new(vec![(0, -3.0), (1, -4.0), (2, -2.0)], Sense::Ge, -8.0),
        Row::new(vec![(0, 3.0), (1, -4.0), (2, -2.0)], Sense::Ge, -5.0),
        Row::new(vec![(0, -3.0), (1, 4.0), (2, -2.0)], Sense::Ge, -4.0),
        Row::new(vec![(0, 3.0), (1, 4.0), (2, -2.0)], Sense::Ge, -1.0),
    ];
    MilpProblem::new(
        "example1",
        ObjSense::Min,
        vec![1.0, -2.0, -6.0],
        rows,
        vec![0.0; 3],
        vec![1.0; 3],
        vec![true; 3],
    )
    .expect("example is well formed")
}

#[cfg(test)]
mod tests;
