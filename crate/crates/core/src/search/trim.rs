//! Removal of dive changes that the terminal node does not need.

use serde::{Deserialize, Serialize};

use crate::lp::BoundSide;

use super::change::BoundChange;
use super::offshoot::Offshoot;
use super::PRUNE_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrimMethod {
    None,
    DualRule,
    BottomPruning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrimReport {
    pub method: TrimMethod,
    pub removed: usize,
    /// Looser duplicates of a same-side change dropped afterwards.
    pub deduped: usize,
}

impl TrimReport {
    pub fn total(&self) -> usize {
        self.removed + self.deduped
    }
}

/// Whether the terminal certificate `r` leaves `c` unused: a raised lower
/// bound with `r_i <= 0` or a lowered upper bound with `r_i >= 0`.
pub fn dual_removable(c: &BoundChange, r: &[f64]) -> bool {
    match c.side {
        BoundSide::Lower => r[c.var] <= 0.0,
        BoundSide::Upper => r[c.var] >= 0.0,
    }
}

/// Number of leading changes to keep so that the last kept change created
/// a node with objective at or above `cutoff`. `None` if no recorded node
/// qualifies.
pub fn bottom_prune_len(d: &[BoundChange], cutoff: f64) -> Option<usize> {
    d.iter()
        .position(|c| c.objective.is_some_and(|o| o >= cutoff - PRUNE_TOL))
        .map(|k| k + 1)
}

/// Keeps only the tightest change per (variable, side), preserving the
/// position of the survivor. Returns how many were dropped.
pub fn dedup_tightest(d: &mut Vec<BoundChange>) -> usize {
    let before = d.len();
    let keep: Vec<bool> = (0..d.len())
        .map(|i| {
            !d.iter().enumerate().any(|(k, o)| {
                k != i
                    && o.same_slot(&d[i])
                    && (!d[i].at_least_as_tight(o) || (o.value == d[i].value && k > i))
            })
        })
        .collect();
    let mut it = keep.iter();
    d.retain(|_| *it.next().unwrap());
    before - d.len()
}

/// Delayed trimming at the first selection of an offshoot: applies
/// whichever of the dual rule and bottom pruning removes more changes
/// (the dual rule on ties), then deduplicates.
pub fn trim(off: &mut Offshoot, cutoff: f64) -> TrimReport {
    let by_dual = off
        .dual_info
        .as_ref()
        .map(|r| off.d.iter().filter(|c| dual_removable(c, r)).count())
        .unwrap_or(0);
    let by_bottom = if off.disturbed {
        0
    } else {
        bottom_prune_len(&off.d, cutoff).map_or(0, |k| off.d.len() - k)
    };

    let method = if by_dual > 0 && by_dual >= by_bottom {
        let r = off.dual_info.as_ref().unwrap();
        off.d.retain(|c| !dual_removable(c, r));
        off.disturbed = true;
        TrimMethod::DualRule
    } else if by_bottom > 0 {
        off.d.truncate(off.d.len() - by_bottom);
        TrimMethod::BottomPruning
    } else {
        TrimMethod::None
    };
    let deduped = dedup_tightest(&mut off.d);
    if deduped > 0 {
        off.disturbed = true;
    }
    TrimReport {
        method,
        removed: by_dual.max(by_bottom),
        deduped,
    }
}

/// Bottom pruning alone, for later selections of an undisturbed offshoot.
pub fn reprune(off: &mut Offshoot, cutoff: f64) -> TrimReport {
    let mut removed = 0;
    if !off.disturbed {
        if let Some(k) = bottom_prune_len(&off.d, cutoff) {
            removed = off.d.len() - k;
            off.d.truncate(k);
        }
    }
    TrimReport {
        method: if removed > 0 {
            TrimMethod::BottomPruning
        } else {
            TrimMethod::None
        },
        removed,
        deduped: 0,
    }
}
