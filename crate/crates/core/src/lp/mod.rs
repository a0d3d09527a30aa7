//! Bounded-variable LP solving: dual simplex with hotstart, warmstart and
//! per-variable dual information for trimming.

mod model;
mod outcome;
mod simplex;

pub use model::{Bounds, LpModel, Row, Sense};
pub use outcome::{dual_value, extract_dual_info, Basis, LpOutcome, LpStatus, VarStatus};
pub use simplex::{
    hotstart_solve, solve_from_scratch, warmstart_solve, BoundSide, LpConfig, LpSolver,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("inconsistent model shape: {0}")]
    Shape(String),
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("variable {var} has lower bound {lower} above upper bound {upper}")]
    InvertedBounds { var: usize, lower: f64, upper: f64 },
    #[error("working bounds of variable {var} conflict: {lower} > {upper}")]
    BoundConflict { var: usize, lower: f64, upper: f64 },
    #[error("no dual information for an outcome with status {0:?}")]
    NoDualInfo(LpStatus),
}
