use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::branching::{DiveDirection, Strategy};

use super::offshoot::NodeSelection;

/// How the top bound of an offshoot is raised after branching from its top.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bounding {
    Off,
    /// Shift the child's objective by the reduced cost of the flipped
    /// variable.
    #[default]
    ReducedCost,
    /// Evaluate the child's full dual solution on the parent's new box.
    DualValue,
    /// Re-solve the parent's new top LP, warmstarted from the child basis.
    Resolve,
}

impl Bounding {
    pub const ALL: [Bounding; 4] = [
        Bounding::Off,
        Bounding::ReducedCost,
        Bounding::DualValue,
        Bounding::Resolve,
    ];
}

impl fmt::Display for Bounding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Bounding::Off => "off",
            Bounding::ReducedCost => "1",
            Bounding::DualValue => "2",
            Bounding::Resolve => "3",
        })
    }
}

impl FromStr for Bounding {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "off" | "0" => Ok(Bounding::Off),
            "1" => Ok(Bounding::ReducedCost),
            "2" => Ok(Bounding::DualValue),
            "3" => Ok(Bounding::Resolve),
            _ => Err(format!(
                "unknown bounding method {s:?} (expected off, 1, 2 or 3)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub strategy: Strategy,
    /// Maximum number of bound changes per dive; `None` is unlimited and
    /// `Some(0)` gives best-bound branch-and-bound.
    pub max_dive_depth: Option<usize>,
    pub trim: bool,
    pub bounding: Bounding,
    /// Dives longer than this are split at the midpoint.
    pub split_threshold: usize,
    pub dive_direction: DiveDirection,
    pub node_selection: NodeSelection,
    /// Replace each dive by fixing all integer variables at once.
    pub plunge: bool,
    pub strong_branching: bool,
    pub reliability: u32,
    pub strong_candidates: usize,
    pub time_limit: Option<Duration>,
    pub node_limit: Option<u64>,
    /// Carried into run records; the search itself is deterministic.
    pub seed: u64,
    pub record_events: bool,
    /// Re-solve after trims and purges and compare all bounding methods.
    pub audit: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            strategy: Strategy::default(),
            max_dive_depth: None,
            trim: true,
            bounding: Bounding::default(),
            split_threshold: 64,
            dive_direction: DiveDirection::default(),
            node_selection: NodeSelection::default(),
            plunge: false,
            strong_branching: true,
            reliability: 5,
            strong_candidates: 10,
            time_limit: None,
            node_limit: None,
            seed: 0,
            record_events: false,
            audit: false,
        }
    }
}

impl SearchConfig {
    /// Short stable description of the settings that affect the search.
    pub fn fingerprint(&self) -> String {
        let depth = self
            .max_dive_depth
            .map_or_else(|| "inf".to_string(), |d| d.to_string());
        let mut s = format!(
            "strategy={} depth={} trim={} bounding={} split={} dir={:?} sel={:?}",
            self.strategy,
            depth,
            if self.trim { "on" } else { "off" },
            self.bounding,
            self.split_threshold,
            self.dive_direction,
            self.node_selection,
        );
        if self.plunge {
            s.push_str(" plunge");
        }
        if !self.strong_branching {
            s.push_str(" no-strong");
        }
        s.to_lowercase()
    }
}
