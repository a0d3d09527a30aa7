use serde::{Deserialize, Serialize};

use crate::lp::{LpError, LpModel, Row};

use super::ModelError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ObjSense {
    #[default]
    Min,
    Max,
}

/// A mixed-integer linear program.
///
/// The LP core always minimizes; a maximization problem is stored with its
/// objective negated and [`MilpProblem::external_objective`] maps internal
/// values back.
#[derive(Debug, Clone, PartialEq)]
pub struct MilpProblem {
    name: String,
    sense: ObjSense,
    lp: LpModel,
    integral: Vec<bool>,
    var_names: Vec<String>,
    row_names: Vec<String>,
    /// Constant added to the external objective.
    offset: f64,
}

impl MilpProblem {
    /// Builds a problem from external data (objective in `sense`).
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        sense: ObjSense,
        objective: Vec<f64>,
        rows: Vec<Row>,
        lower: Vec<f64>,
        upper: Vec<f64>,
        integral: Vec<bool>,
    ) -> Result<Self, ModelError> {
        let n = objective.len();
        let var_names = (0..n).map(|j| format!("x{}", j + 1)).collect();
        let row_names = (0..rows.len()).map(|i| format!("c{}", i + 1)).collect();
        Self::with_names(
            name, sense, objective, rows, lower, upper, integral, var_names, row_names, 0.0,
        )
    }

    #[allow(clippy::too_many_arguments)]
    pub fn with_names(
        name: impl Into<String>,
        sense: ObjSense,
        objective: Vec<f64>,
        mut rows: Vec<Row>,
        mut lower: Vec<f64>,
        mut upper: Vec<f64>,
        integral: Vec<bool>,
        var_names: Vec<String>,
        row_names: Vec<String>,
        offset: f64,
    ) -> Result<Self, ModelError> {
        let n = objective.len();
        if integral.len() != n || var_names.len() != n || row_names.len() != rows.len() {
            return Err(ModelError::Invalid(
                "variable or row attribute lengths disagree".into(),
            ));
        }
        if !offset.is_finite() {
            return Err(ModelError::Invalid("objective offset is not finite".into()));
        }
        for row in &mut rows {
            row.coefs.sort_by_key(|&(j, _)| j);
        }
        // integer bounds are rounded inward
        for j in 0..n {
            if integral[j] {
                lower[j] = (lower[j] - 1e-9).ceil();
                upper[j] = (upper[j] + 1e-9).floor();
            }
        }
        let internal = match sense {
            ObjSense::Min => objective,
            ObjSense::Max => objective.into_iter().map(|c| -c).collect(),
        };
        let lp = LpModel::new(internal, rows, lower, upper).map_err(|e| match e {
            LpError::InvertedBounds { var, lower, upper } => ModelError::Invalid(format!(
                "variable {} has empty domain [{lower}, {upper}]",
                var_names[var]
            )),
            other => ModelError::Lp(other),
        })?;
        Ok(Self {
            name: name.into(),
            sense,
            lp,
            integral,
            var_names,
            row_names,
            offset,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn sense(&self) -> ObjSense {
        self.sense
    }

    pub fn lp(&self) -> &LpModel {
        &self.lp
    }

    pub fn num_vars(&self) -> usize {
        self.lp.num_vars()
    }

    pub fn num_rows(&self) -> usize {
        self.lp.num_rows()
    }

    pub fn is_integral(&self, j: usize) -> bool {
        self.integral[j]
    }

    pub fn integrality(&self) -> &[bool] {
        &self.integral
    }

    pub fn integer_vars(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_vars()).filter(move |&j| self.integral[j])
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn row_names(&self) -> &[String] {
        &self.row_names
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Objective in the external sense, including the offset.
    pub fn external_objective(&self, internal: f64) -> f64 {
        match self.sense {
            ObjSense::Min => internal + self.offset,
            ObjSense::Max => -internal + self.offset,
        }
    }

    /// Objective coefficients in the external sense.
    pub fn external_costs(&self) -> Vec<f64> {
        match self.sense {
            ObjSense::Min => self.lp.objective().to_vec(),
            ObjSense::Max => self.lp.objective().iter().map(|c| -c).collect(),
        }
    }

    /// True if every integer variable has a finite box.
    pub fn integers_bounded(&self) -> bool {
        self.integer_vars()
            .all(|j| self.lp.lower()[j].is_finite() && self.lp.upper()[j].is_finite())
    }

    /// Checks integrality and feasibility of `x` within `tol`.
    pub fn is_feasible(&self, x: &[f64], tol: f64) -> bool {
        if x.len() != self.num_vars() {
            return false;
        }
        let integral_ok = self
            .integer_vars()
            .all(|j| (x[j] - x[j].round()).abs() <= tol);
        integral_ok && self.lp.max_violation(x, &self.lp.global_bounds()) <= tol
    }
}
