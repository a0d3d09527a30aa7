//! Offshoot branch-and-bound for small mixed-integer linear programs.
//!
//! A dive is kept as an *offshoot*: its top node plus the set of bound
//! changes that led to a prunable node. The changes can later be processed
//! in any order (shaping) and the unnecessary ones dropped using the
//! terminal node's dual information (trimming).

pub mod branching;
pub mod harness;
pub mod lp;
pub mod model;
pub mod oracle;
pub mod search;

pub use branching::{DiveDirection, PseudocostStore, Strategy};
pub use lp::{Basis, BoundSide, Bounds, LpModel, LpOutcome, LpStatus, Row, Sense};
pub use model::{read_problem, MilpProblem, ObjSense};
pub use oracle::{enumerate_optimum, OracleResult, OracleStatus};
pub use search::{
    solve, BoundChange, Bounding, NodeSelection, Offshoot, SearchConfig, SearchError, SearchStats,
    SolveResult, SolveStatus,
};
