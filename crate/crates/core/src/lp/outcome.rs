use serde::{Deserialize, Serialize};

use super::model::{Bounds, LpModel};
use super::LpError;

/// Position of a variable relative to the basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VarStatus {
    Basic,
    AtLower,
    AtUpper,
    /// Nonbasic free variable held at zero.
    Free,
}

/// Basis snapshot: one status per structural column and per row slack.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Basis {
    pub cols: Vec<VarStatus>,
    pub rows: Vec<VarStatus>,
}

impl Basis {
    /// All slacks basic, structurals at a finite bound.
    pub fn slack(model: &LpModel) -> Self {
        let cols = (0..model.num_vars())
            .map(|j| {
                if model.lower()[j].is_finite() {
                    VarStatus::AtLower
                } else if model.upper()[j].is_finite() {
                    VarStatus::AtUpper
                } else {
                    VarStatus::Free
                }
            })
            .collect();
        Self {
            cols,
            rows: vec![VarStatus::Basic; model.num_rows()],
        }
    }

    pub fn num_basic(&self) -> usize {
        self.cols
            .iter()
            .chain(&self.rows)
            .filter(|&&s| s == VarStatus::Basic)
            .count()
    }

    pub fn is_consistent(&self, model: &LpModel) -> bool {
        self.cols.len() == model.num_vars()
            && self.rows.len() == model.num_rows()
            && self.num_basic() == model.num_rows()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    /// Infeasible with a verified Farkas certificate in `dual_info`/`row_duals`.
    Infeasible,
    /// The dual ray was found but its certificate does not clear the
    /// tolerance; the node is treated as infeasible but the ray must not be
    /// used for trimming.
    DualUnboundedTreatedAsInfeasible,
    /// Dual infeasible and primal feasible: the relaxation is unbounded.
    Unbounded,
    IterationLimit,
}

impl LpStatus {
    pub fn is_infeasible(self) -> bool {
        matches!(
            self,
            LpStatus::Infeasible | LpStatus::DualUnboundedTreatedAsInfeasible
        )
    }
}

/// Result of one LP solve.
///
/// `dual_info` holds, per structural variable, the reduced cost (optimal
/// status) or the Farkas-derived vector (infeasible status). `row_duals`
/// holds the matching row multipliers. Both follow one sign convention: the
/// value
///
/// `Σ_i y_i·(lo_i if y_i > 0 else hi_i) + Σ_j r_j·(lb_j if r_j > 0 else ub_j)`
///
/// equals the objective for an optimal outcome and is strictly positive for
/// an infeasible one (a ray carries no objective term).
#[derive(Debug, Clone, PartialEq)]
pub struct LpOutcome {
    pub status: LpStatus,
    pub objective: f64,
    pub primal: Vec<f64>,
    pub dual_info: Vec<f64>,
    pub row_duals: Vec<f64>,
    pub basis: Basis,
    pub iterations: usize,
}

impl LpOutcome {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    /// Evaluates the dual bound implied by `(row_duals, dual_info)` on an
    /// arbitrary bound box. For an optimal outcome this is a valid lower
    /// bound on the LP value over `bounds`; for an infeasible outcome a
    /// positive value proves infeasibility of `bounds`.
    pub fn dual_bound(&self, model: &LpModel, bounds: &Bounds) -> f64 {
        dual_value(model, bounds, &self.row_duals, &self.dual_info)
    }
}

/// `Σ_i y_i·(row bound picked by sign) + Σ_j r_j·(var bound picked by sign)`.
pub fn dual_value(model: &LpModel, bounds: &Bounds, y: &[f64], r: &[f64]) -> f64 {
    let mut total = 0.0;
    for (row, &yi) in model.rows().iter().zip(y) {
        let (lo, hi) = row.activity_bounds();
        if yi > 0.0 {
            total += yi * lo;
        } else if yi < 0.0 {
            total += yi * hi;
        }
    }
    for (j, &rj) in r.iter().enumerate() {
        if rj > 0.0 {
            total += rj * bounds.lower[j];
        } else if rj < 0.0 {
            total += rj * bounds.upper[j];
        }
    }
    total
}

/// Per-variable dual information of a finished solve.
pub fn extract_dual_info(outcome: &LpOutcome) -> Result<&[f64], LpError> {
    match outcome.status {
        LpStatus::Optimal | LpStatus::Infeasible | LpStatus::DualUnboundedTreatedAsInfeasible => {
            Ok(&outcome.dual_info)
        }
        status => Err(LpError::NoDualInfo(status)),
    }
}
