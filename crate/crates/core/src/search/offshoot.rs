use std::collections::BTreeMap;

use ordered_float::OrderedFloat;
use serde::{Deserialize, Serialize};

use crate::lp::Basis;

use super::change::BoundChange;

/// How the dive of an offshoot ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Terminal {
    Infeasible,
    /// Objective at or above the cutoff (including incumbent nodes).
    Cutoff,
    /// The dive stopped before reaching a prunable node (depth limit or
    /// the upper piece of a split).
    Open,
}

/// A top node `F` and the unprocessed changes `D` of the dive below it.
///
/// With `open_node` set, `D` is empty and the entry stands for an ordinary
/// branch-and-bound node whose LP has been solved but not branched on.
#[derive(Debug, Clone)]
pub struct Offshoot {
    pub id: usize,
    pub parent: Option<usize>,
    pub f: Vec<BoundChange>,
    /// Unprocessed dive changes, in the order the dive took them.
    pub d: Vec<BoundChange>,
    pub original_order: Vec<BoundChange>,
    pub z_top: f64,
    pub top_basis: Basis,
    /// Basis of the last dive node; warmstart for bottom branches.
    pub bottom_basis: Basis,
    /// Reduced costs or Farkas vector of the terminal node, when usable.
    pub dual_info: Option<Vec<f64>>,
    pub terminal: Terminal,
    pub disturbed: bool,
    /// Set once the offshoot has been selected (and trimmed) the first time.
    pub selected: bool,
    pub open_node: bool,
    pub seq: u64,
}

impl Offshoot {
    pub fn dive_len(&self) -> usize {
        self.original_order.len()
    }

    /// Processes `D[idx]` from the bottom and returns the top set of the new
    /// offshoot, `F ∪ (D \ {c}) ∪ {flip(c)}`. The recorded node objectives
    /// stay valid only if `c` was the last unprocessed change.
    pub fn branch_bottom(&mut self, idx: usize) -> Vec<BoundChange> {
        let mut c = self.d.remove(idx);
        debug_assert!(!c.processed);
        c.processed = true;
        if idx != self.d.len() {
            self.disturbed = true;
        }
        let mut f = self.f.clone();
        f.extend(self.d.iter().cloned());
        f.push(c.flip());
        f
    }

    /// Processes `D[idx]` from the top: the new offshoot gets `F ∪ {flip(c)}`
    /// and `c` moves into this offshoot's `F`. Returns the new top set, the
    /// processed change, and the exact objective of this offshoot's new top
    /// node when it is still on record (undisturbed and `c` first).
    pub fn branch_top(&mut self, idx: usize) -> (Vec<BoundChange>, BoundChange, Option<f64>) {
        let mut c = self.d.remove(idx);
        debug_assert!(!c.processed);
        c.processed = true;
        let exact = if idx == 0 && !self.disturbed {
            c.objective
        } else {
            self.disturbed = true;
            None
        };
        let mut child = self.f.clone();
        child.push(c.flip());
        self.f.push(c.clone());
        (child, c, exact)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeSelection {
    /// Smallest top bound first, ties by creation order.
    #[default]
    BestBound,
    /// Most recently created first.
    DepthFirst,
}

/// Open offshoots and open nodes, keyed by selection priority.
#[derive(Debug, Clone, Default)]
pub struct OffshootPool {
    selection: NodeSelection,
    entries: BTreeMap<(OrderedFloat<f64>, u64), (usize, f64)>,
    counter: u64,
}

impl OffshootPool {
    pub fn new(selection: NodeSelection) -> Self {
        Self {
            selection,
            ..Self::default()
        }
    }

    /// Next insertion counter value.
    pub fn next_seq(&mut self) -> u64 {
        let s = self.counter;
        self.counter += 1;
        s
    }

    pub fn insert(&mut self, id: usize, z_top: f64, seq: u64) {
        let key = match self.selection {
            NodeSelection::BestBound => (OrderedFloat(z_top), seq),
            NodeSelection::DepthFirst => (OrderedFloat(0.0), u64::MAX - seq),
        };
        self.entries.insert(key, (id, z_top));
    }

    /// Removes and returns the id of the entry to process next.
    pub fn pop(&mut self) -> Option<usize> {
        self.entries.pop_first().map(|(_, (id, _))| id)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Smallest top bound among the open entries.
    pub fn min_bound(&self) -> Option<f64> {
        match self.selection {
            NodeSelection::BestBound => self.entries.first_key_value().map(|(_, &(_, z))| z),
            NodeSelection::DepthFirst => self
                .entries
                .values()
                .map(|&(_, z)| z)
                .min_by(|a, b| a.total_cmp(b)),
        }
    }

    /// Drops every entry whose top bound reaches `cutoff - tol`; returns the
    /// removed `(id, z_top)` pairs in priority order.
    pub fn purge(&mut self, cutoff: f64, tol: f64) -> Vec<(usize, f64)> {
        let mut removed = Vec::new();
        self.entries.retain(|_, &mut (id, z)| {
            if z >= cutoff - tol {
                removed.push((id, z));
                false
            } else {
                true
            }
        });
        removed
    }

    pub fn ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.values().map(|&(id, _)| id)
    }
}
