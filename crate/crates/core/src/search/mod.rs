//! The offshoot search: dives recorded as offshoots, a best-bound pool of
//! open offshoots, delayed trimming, branching from either end, top-bound
//! strengthening, splitting of long dives and a depth limit that turns the
//! method into ordinary branch-and-bound.

mod change;
mod config;
mod engine;
mod events;
mod offshoot;
mod trim;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use change::{bounds_with, BoundChange};
pub use config::{Bounding, SearchConfig};
pub use engine::{reduced_cost_bound, solve, CutoffReport, Incumbent, Search};
pub use events::{Action, Audit, BoundingSample, Event, OffshootSnapshot, SearchStats};
pub use offshoot::{NodeSelection, Offshoot, OffshootPool, Terminal};
pub use trim::{
    bottom_prune_len, dedup_tightest, dual_removable, reprune, trim, TrimMethod, TrimReport,
};

use crate::lp::LpError;

/// A node is prunable when its objective reaches `cutoff - PRUNE_TOL`;
/// an incumbent must beat the cutoff by more than this to register.
pub const PRUNE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// Time or node limit reached; the incumbent, if any, is not proven.
    Limit,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Unbounded => "unbounded",
            SolveStatus::Limit => "limit",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub status: SolveStatus,
    /// Incumbent objective in the problem's own sense.
    pub objective: Option<f64>,
    pub point: Option<Vec<f64>>,
    /// Proven bound in the problem's own sense (equal to the objective when
    /// optimal).
    pub best_bound: Option<f64>,
    pub stats: SearchStats,
    pub events: Vec<Event>,
    pub audit: Audit,
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("LP iteration limit reached around node {node}; aborting")]
    IterationLimit { node: u64 },
    #[error("LP relaxation became unbounded at node {node}")]
    UnboundedNode { node: u64 },
    #[error("candidate point is infeasible (violation {violation:e})")]
    InfeasibleCandidate { violation: f64 },
    #[error("{0}")]
    Contract(String),
}

#[cfg(test)]
mod tests;
