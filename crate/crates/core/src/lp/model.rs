//! Constraint data for a bounded-variable LP.

use serde::{Deserialize, Serialize};

use super::LpError;

/// Row sense relative to the right-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sense {
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=", alias = "==")]
    Eq,
}

impl Sense {
    pub fn as_str(self) -> &'static str {
        match self {
            Sense::Ge => ">=",
            Sense::Le => "<=",
            Sense::Eq => "=",
        }
    }
}

/// A sparse constraint row `coefs · x  <sense>  rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub coefs: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl Row {
    pub fn new(coefs: Vec<(usize, f64)>, sense: Sense, rhs: f64) -> Self {
        Self { coefs, sense, rhs }
    }

    /// Activity interval `[lo, hi]` implied by the sense.
    pub fn activity_bounds(&self) -> (f64, f64) {
        match self.sense {
            Sense::Ge => (self.rhs, f64::INFINITY),
            Sense::Le => (f64::NEG_INFINITY, self.rhs),
            Sense::Eq => (self.rhs, self.rhs),
        }
    }

    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coefs.iter().map(|&(j, a)| a * x[j]).sum()
    }
}

/// Working bounds on the structural variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        debug_assert_eq!(lower.len(), upper.len());
        Self { lower, upper }
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    /// First variable whose lower bound exceeds its upper bound.
    pub fn first_conflict(&self, tol: f64) -> Option<usize> {
        (0..self.len()).find(|&j| self.lower[j] > self.upper[j] + tol)
    }
}

/// Immutable LP data: `min c·x  s.t.  rows,  lower <= x <= upper`.
///
/// Columns are kept alongside the rows so that the simplex can price
/// structural variables without transposing on every iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct LpModel {
    num_vars: usize,
    objective: Vec<f64>,
    rows: Vec<Row>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    columns: Vec<Vec<(usize, f64)>>,
}

impl LpModel {
    pub fn new(
        objective: Vec<f64>,
        rows: Vec<Row>,
        lower: Vec<f64>,
        upper: Vec<f64>,
    ) -> Result<Self, LpError> {
        let num_vars = objective.len();
        if lower.len() != num_vars || upper.len() != num_vars {
            return Err(LpError::Shape(format!(
                "{num_vars} objective entries but {} lower / {} upper bounds",
                lower.len(),
                upper.len()
            )));
        }
        for (j, &c) in objective.iter().enumerate() {
            if !c.is_finite() {
                return Err(LpError::NonFinite(format!("objective coefficient {j}")));
            }
        }
        for j in 0..num_vars {
            if lower[j].is_nan() || upper[j].is_nan() {
                return Err(LpError::NonFinite(format!("bound of variable {j}")));
            }
            if lower[j] == f64::INFINITY || upper[j] == f64::NEG_INFINITY {
                return Err(LpError::NonFinite(format!("bound of variable {j}")));
            }
            if lower[j] > upper[j] {
                return Err(LpError::InvertedBounds {
                    var: j,
                    lower: lower[j],
                    upper: upper[j],
                });
            }
        }
        let mut columns = vec![Vec::new(); num_vars];
        for (i, row) in rows.iter().enumerate() {
            if !row.rhs.is_finite() {
                return Err(LpError::NonFinite(format!("right-hand side of row {i}")));
            }
            for &(j, a) in &row.coefs {
                if j >= num_vars {
                    return Err(LpError::Shape(format!(
                        "row {i} references variable {j} of {num_vars}"
                    )));
                }
                if !a.is_finite() {
                    return Err(LpError::NonFinite(format!("coefficient ({i}, {j})")));
                }
                if a != 0.0 {
                    columns[j].push((i, a));
                }
            }
        }
        for col in &mut columns {
            // merge duplicate entries of the same row
            col.sort_by_key(|&(i, _)| i);
            col.dedup_by(|b, a| {
                if a.0 == b.0 {
                    a.1 += b.1;
                    true
                } else {
                    false
                }
            });
        }
        Ok(Self {
            num_vars,
            objective,
            rows,
            lower,
            upper,
            columns,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn column(&self, j: usize) -> &[(usize, f64)] {
        &self.columns[j]
    }

    /// The model's own variable bounds as a working box.
    pub fn global_bounds(&self) -> Bounds {
        Bounds::new(self.lower.clone(), self.upper.clone())
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Largest violation of any row or bound by `x`.
    pub fn max_violation(&self, x: &[f64], bounds: &Bounds) -> f64 {
        let mut worst: f64 = 0.0;
        for row in &self.rows {
            let act = row.activity(x);
            let (lo, hi) = row.activity_bounds();
            worst = worst.max(lo - act).max(act - hi);
        }
        for ((xj, lo), hi) in x.iter().zip(&bounds.lower).zip(&bounds.upper) {
            worst = worst.max(lo - xj).max(xj - hi);
        }
        worst
    }

    /// Checks that `bounds` matches the model shape and stays inside the
    /// model's own box.
    pub fn check_bounds(&self, bounds: &Bounds) -> Result<(), LpError> {
        if bounds.lower.len() != self.num_vars || bounds.upper.len() != self.num_vars {
            return Err(LpError::Shape(format!(
                "bounds for {} variables, model has {}",
                bounds.len(),
                self.num_vars
            )));
        }
        for j in 0..self.num_vars {
            if bounds.lower[j] < self.lower[j] || bounds.upper[j] > self.upper[j] {
                return Err(LpError::Shape(format!(
                    "working bounds of variable {j} leave the model box"
                )));
            }
        }
        Ok(())
    }
}
