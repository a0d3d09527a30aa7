use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::lp::{BoundSide, LpStatus};

use super::change::BoundChange;
use super::offshoot::Terminal;
use super::trim::TrimMethod;

/// What a logged step did. Field names must not collide with `Event`'s,
/// which the action is flattened into.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Action {
    Root,
    /// One dive step applying the given change.
    Dive {
        var: usize,
        side: BoundSide,
        value: f64,
    },
    /// All integer variables fixed at once.
    Plunge {
        changes: usize,
    },
    /// Top node of a new offshoot; `flip` is the complemented change.
    BranchBottom {
        flip: BoundChange,
    },
    BranchTop {
        flip: BoundChange,
    },
    /// Re-solve of an open node before diving from it.
    Restore,
    /// Re-solve of the lower piece's top after a split.
    SplitTop,
    /// Re-solve of a parent top for bounding.
    BoundResolve,
    NewOffshoot {
        dive_len: usize,
        terminal: Terminal,
        z_top: f64,
    },
    OpenNode {
        z: f64,
    },
    Trim {
        method: TrimMethod,
        removed: usize,
        deduped: usize,
    },
    Strengthen {
        old: f64,
        new: f64,
    },
    Incumbent {
        value: f64,
    },
    Prune {
        z_top: f64,
    },
}

/// One log record; objective values are in the problem's own sense.
/// `node` is set for LP solves that process a new node;
/// `offshoot` is the offshoot the step belongs to (the one being branched
/// for top nodes, the one being built for dive nodes).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub seq: usize,
    pub node: Option<u64>,
    pub offshoot: Option<usize>,
    #[serde(flatten)]
    pub action: Action,
    pub status: Option<LpStatus>,
    pub objective: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchStats {
    /// LP solves that processed a tree node.
    pub nodes: u64,
    /// All LP solves, including restores, re-solves and strong branching.
    pub lp_solves: u64,
    pub lp_iterations: u64,
    pub offshoots: u64,
    pub open_nodes: u64,
    pub trims: u64,
    pub changes_trimmed: u64,
    pub prunes_by_bound: u64,
    pub incumbents: u64,
    pub strong_branch_lps: u64,
    pub splits: u64,
    pub wall_time: Duration,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundingSample {
    pub reduced_cost: f64,
    pub dual_value: f64,
    pub resolve: f64,
}

/// A terminal offshoot as created, for order-independence checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OffshootSnapshot {
    pub f: Vec<BoundChange>,
    pub d: Vec<BoundChange>,
    pub terminal: Terminal,
    /// Cutoff at creation time.
    pub cutoff: f64,
}

/// Self-checks collected when `SearchConfig::audit` is set.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Audit {
    pub trim_checks: usize,
    pub trim_violations: Vec<String>,
    pub prune_checks: usize,
    pub prune_violations: Vec<String>,
    pub monotone_checks: usize,
    pub monotone_violations: Vec<String>,
    pub bounding: Vec<BoundingSample>,
    pub offshoots: Vec<OffshootSnapshot>,
}

impl Audit {
    pub fn violations(&self) -> usize {
        self.trim_violations.len() + self.prune_violations.len() + self.monotone_violations.len()
    }
}
