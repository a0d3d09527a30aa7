use std::fmt;

use serde::{Deserialize, Serialize};

use crate::lp::{BoundSide, Bounds};

/// One branching decision: `x_var >= value` or `x_var <= value`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundChange {
    pub var: usize,
    pub side: BoundSide,
    pub value: f64,
    /// LP value of the variable in the node where the change was made.
    pub lp_value: f64,
    /// Objective of the node this change created (`+inf` when that node was
    /// infeasible, `None` when it was never solved on its own).
    pub objective: Option<f64>,
    pub processed: bool,
}

impl BoundChange {
    pub fn new(var: usize, side: BoundSide, value: f64, lp_value: f64) -> Self {
        Self {
            var,
            side,
            value,
            lp_value,
            objective: None,
            processed: false,
        }
    }

    pub fn lower(var: usize, value: f64) -> Self {
        Self::new(var, BoundSide::Lower, value, value)
    }

    pub fn upper(var: usize, value: f64) -> Self {
        Self::new(var, BoundSide::Upper, value, value)
    }

    /// The complementary integer branch: `x >= b` becomes `x <= b - 1` and
    /// `x <= b` becomes `x >= b + 1`.
    pub fn flip(&self) -> Self {
        let (side, value) = match self.side {
            BoundSide::Lower => (BoundSide::Upper, self.value - 1.0),
            BoundSide::Upper => (BoundSide::Lower, self.value + 1.0),
        };
        Self::new(self.var, side, value, self.lp_value)
    }

    /// Tightens `bounds` by this change (never loosens).
    pub fn apply(&self, bounds: &mut Bounds) {
        match self.side {
            BoundSide::Lower => {
                if self.value > bounds.lower[self.var] {
                    bounds.lower[self.var] = self.value;
                }
            }
            BoundSide::Upper => {
                if self.value < bounds.upper[self.var] {
                    bounds.upper[self.var] = self.value;
                }
            }
        }
    }

    /// Whether `other` is on the same variable and side.
    pub fn same_slot(&self, other: &BoundChange) -> bool {
        self.var == other.var && self.side == other.side
    }

    /// Whether this change is at least as tight as `other` (same slot).
    pub fn at_least_as_tight(&self, other: &BoundChange) -> bool {
        match self.side {
            BoundSide::Lower => self.value >= other.value,
            BoundSide::Upper => self.value <= other.value,
        }
    }

    /// Fractional distances `(down, up)` of the recorded LP value. Integral
    /// values count as halfway in both directions.
    pub fn frac_distances(&self) -> (f64, f64) {
        frac_distances(self.lp_value)
    }
}

pub(crate) fn frac_distances(v: f64) -> (f64, f64) {
    let f = v - v.floor();
    if !(1e-9..=1.0 - 1e-9).contains(&f) {
        (0.5, 0.5)
    } else {
        (f, 1.0 - f)
    }
}

impl fmt::Display for BoundChange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.side {
            BoundSide::Lower => ">=",
            BoundSide::Upper => "<=",
        };
        write!(f, "x{}{}{}", self.var + 1, op, self.value)
    }
}

/// `base` tightened by every change in `changes`.
pub fn bounds_with<'a>(
    base: &Bounds,
    changes: impl IntoIterator<Item = &'a BoundChange>,
) -> Bounds {
    let mut b = base.clone();
    for c in changes {
        c.apply(&mut b);
    }
    b
}
