//! Variable selection: which variable a dive branches on next, and which
//! dive change of an offshoot is processed next and from which end.

mod dive;
mod pseudocost;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use dive::{
    fractional_candidates, fractional_part, is_fractional, select_dive_variable, DiveChoice,
    DiveDirection, StrongBranching, StrongReport, INT_TOL,
};
pub use pseudocost::{product_score, Direction, PseudocostStore, SCORE_EPS};

use crate::search::{BoundChange, Offshoot};

/// Offshoot-variable selection strategy.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Last unprocessed change, branched from the bottom.
    Bottom,
    /// First unprocessed change, branched from the top.
    Top,
    /// Best reliable pseudocost from the top, else the worst pseudocost
    /// score from the bottom.
    Pseudo,
    /// Like `Pseudo`, but the fallback ranks by the magnitude of the
    /// terminal dual information.
    #[default]
    PseudoDual,
    /// Scripted order: the first listed variable present in `D`, branched
    /// from the bottom. Unlisted variables come last, latest first.
    Priority(Vec<usize>),
}

impl Strategy {
    /// The four strategies offered on the command line.
    pub const NAMED: [&'static str; 4] = ["bottom", "top", "pseudo", "pseudodual"];
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Bottom => f.write_str("bottom"),
            Strategy::Top => f.write_str("top"),
            Strategy::Pseudo => f.write_str("pseudo"),
            Strategy::PseudoDual => f.write_str("pseudodual"),
            Strategy::Priority(v) => {
                let names: Vec<String> = v.iter().map(|j| format!("x{}", j + 1)).collect();
                write!(f, "priority({})", names.join(","))
            }
        }
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bottom" => Ok(Strategy::Bottom),
            "top" => Ok(Strategy::Top),
            "pseudo" => Ok(Strategy::Pseudo),
            "pseudodual" => Ok(Strategy::PseudoDual),
            _ => Err(format!(
                "unknown strategy {s:?} (expected one of {})",
                Strategy::NAMED.join(", ")
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchSide {
    Top,
    Bottom,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrategyChoice {
    /// Position of the chosen change in the offshoot's `D`.
    pub index: usize,
    pub change: BoundChange,
    pub side: BranchSide,
}

/// Chooses the dive change to process next.
///
/// # Panics
/// If the offshoot has no unprocessed changes.
pub fn select_offshoot_variable(
    off: &Offshoot,
    strategy: &Strategy,
    store: &PseudocostStore,
) -> StrategyChoice {
    let d = &off.d;
    assert!(
        !d.is_empty(),
        "offshoot {} has no unprocessed changes",
        off.id
    );
    let pick = |index: usize, side| StrategyChoice {
        index,
        change: d[index].clone(),
        side,
    };
    match strategy {
        Strategy::Bottom => pick(d.len() - 1, BranchSide::Bottom),
        Strategy::Top => pick(0, BranchSide::Top),
        Strategy::Priority(order) => {
            let index = order
                .iter()
                .find_map(|&v| d.iter().position(|c| c.var == v))
                .unwrap_or(d.len() - 1);
            pick(index, BranchSide::Bottom)
        }
        Strategy::Pseudo | Strategy::PseudoDual => {
            let score = |c: &BoundChange| store.score(c.var, c.frac_distances());
            if let Some(i) = extreme(d, |c| store.is_reliable(c.var), score, true) {
                return pick(i, BranchSide::Top);
            }
            let i = match (&off.dual_info, strategy) {
                (Some(r), Strategy::PseudoDual) => extreme(d, |_| true, |c| r[c.var].abs(), false),
                _ => extreme(d, |_| true, score, false),
            };
            pick(i.expect("nonempty"), BranchSide::Bottom)
        }
    }
}

/// Index of the highest (or lowest) scoring eligible change; ties go to the
/// lowest variable index, then the earliest position.
fn extreme(
    d: &[BoundChange],
    eligible: impl Fn(&BoundChange) -> bool,
    score: impl Fn(&BoundChange) -> f64,
    highest: bool,
) -> Option<usize> {
    let mut best: Option<(f64, usize)> = None;
    for (i, c) in d.iter().enumerate() {
        if !eligible(c) {
            continue;
        }
        let s = score(c);
        let better = match best {
            None => true,
            Some((bs, bi)) => {
                let strictly = if highest { s > bs } else { s < bs };
                strictly || (s == bs && c.var < d[bi].var)
            }
        };
        if better {
            best = Some((s, i));
        }
    }
    best.map(|(_, i)| i)
}

#[cfg(test)]
mod tests;
