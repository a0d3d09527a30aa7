use serde::{Deserialize, Serialize};

use crate::lp::{BoundSide, LpError, LpOutcome, LpSolver, LpStatus};

use super::pseudocost::{product_score, Direction, PseudocostStore};

/// Distance from an integer below which a value counts as integral.
pub const INT_TOL: f64 = 1e-6;

/// Which child a dive follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiveDirection {
    /// Down if the fractional part is below one half, up otherwise.
    #[default]
    Round,
    Up,
    Down,
}

impl DiveDirection {
    pub fn pick(self, value: f64) -> Direction {
        match self {
            DiveDirection::Up => Direction::Up,
            DiveDirection::Down => Direction::Down,
            DiveDirection::Round => {
                if value - value.floor() < 0.5 {
                    Direction::Down
                } else {
                    Direction::Up
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiveChoice {
    pub var: usize,
    pub side: BoundSide,
    pub value: f64,
    pub lp_value: f64,
    /// The other child was shown infeasible by strong branching.
    pub forced: bool,
}

impl DiveChoice {
    pub fn new(var: usize, lp_value: f64, dir: Direction, forced: bool) -> Self {
        let (side, value) = match dir {
            Direction::Down => (BoundSide::Upper, lp_value.floor()),
            Direction::Up => (BoundSide::Lower, lp_value.ceil()),
        };
        Self {
            var,
            side,
            value,
            lp_value,
            forced,
        }
    }

    pub fn direction(&self) -> Direction {
        match self.side {
            BoundSide::Lower => Direction::Up,
            BoundSide::Upper => Direction::Down,
        }
    }
}

/// Effort limits for strong branching.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StrongBranching {
    pub enabled: bool,
    pub max_candidates: usize,
    /// Simplex iteration cap per child LP.
    pub iteration_cap: usize,
}

impl Default for StrongBranching {
    fn default() -> Self {
        Self {
            enabled: true,
            max_candidates: 10,
            iteration_cap: 50,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StrongReport {
    pub lps: usize,
    pub iterations: usize,
}

pub fn fractional_part(v: f64) -> f64 {
    v - v.floor()
}

pub fn is_fractional(v: f64) -> bool {
    let f = fractional_part(v);
    f > INT_TOL && f < 1.0 - INT_TOL
}

/// Integer variables with a fractional LP value, in index order.
pub fn fractional_candidates(x: &[f64], integral: &[bool]) -> Vec<usize> {
    (0..x.len())
        .filter(|&j| integral[j] && is_fractional(x[j]))
        .collect()
}

/// Picks the next dive variable at an optimal node. Returns `None` when the
/// node is integral.
///
/// A single candidate is taken as is. Otherwise up to `max_candidates` of
/// the most fractional ones are scored: reliable variables by pseudocost,
/// the rest by strong branching on a clone of `solver`, whose results feed
/// back into `store`. A strong-branching child that turns out infeasible
/// forces the opposite direction immediately.
pub fn select_dive_variable(
    solver: &LpSolver<'_>,
    node: &LpOutcome,
    integral: &[bool],
    store: &mut PseudocostStore,
    direction: DiveDirection,
    strong: &StrongBranching,
    report: &mut StrongReport,
) -> Result<Option<DiveChoice>, LpError> {
    let x = &node.primal;
    let mut cands = fractional_candidates(x, integral);
    if cands.is_empty() {
        return Ok(None);
    }
    if cands.len() == 1 {
        let j = cands[0];
        return Ok(Some(DiveChoice::new(j, x[j], direction.pick(x[j]), false)));
    }
    let dist = |j: usize| {
        let f = fractional_part(x[j]);
        f.min(1.0 - f)
    };
    cands.sort_by(|&a, &b| dist(b).total_cmp(&dist(a)).then(a.cmp(&b)));
    cands.truncate(strong.max_candidates.max(1));

    let mut best: Option<(f64, usize)> = None;
    for &j in &cands {
        let f = fractional_part(x[j]);
        let score = if store.is_reliable(j) || !strong.enabled {
            store.score(j, (f, 1.0 - f))
        } else {
            let down = strong_child(solver, j, BoundSide::Upper, x[j].floor(), strong, report)?;
            let up = strong_child(solver, j, BoundSide::Lower, x[j].ceil(), strong, report)?;
            let gain =
                |out: &LpOutcome, dir: Direction, dist: f64, store: &mut PseudocostStore| match out
                    .status
                {
                    s if s.is_infeasible() => f64::INFINITY,
                    LpStatus::Optimal => {
                        let g = out.objective - node.objective;
                        store.update(j, dir, g, dist);
                        g.max(0.0)
                    }
                    _ => (out.objective - node.objective).max(0.0),
                };
            let gd = gain(&down, Direction::Down, f, store);
            let gu = gain(&up, Direction::Up, 1.0 - f, store);
            if gd.is_infinite() {
                return Ok(Some(DiveChoice::new(j, x[j], Direction::Up, true)));
            }
            if gu.is_infinite() {
                return Ok(Some(DiveChoice::new(j, x[j], Direction::Down, true)));
            }
            product_score(gd, gu)
        };
        let better = match best {
            None => true,
            Some((s, k)) => score > s || (score == s && j < k),
        };
        if better {
            best = Some((score, j));
        }
    }
    let j = best.expect("at least one candidate").1;
    Ok(Some(DiveChoice::new(j, x[j], direction.pick(x[j]), false)))
}

fn strong_child(
    solver: &LpSolver<'_>,
    var: usize,
    side: BoundSide,
    value: f64,
    strong: &StrongBranching,
    report: &mut StrongReport,
) -> Result<LpOutcome, LpError> {
    let mut child = solver.clone();
    child.change_bound(var, side, value);
    let out = child.solve_capped(strong.iteration_cap)?;
    report.lps += 1;
    report.iterations += out.iterations;
    Ok(out)
}
