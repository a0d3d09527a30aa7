use serde::{Deserialize, Serialize};

/// Branching direction of a dive change.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Down,
    Up,
}

impl Direction {
    fn slot(self) -> usize {
        match self {
            Direction::Down => 0,
            Direction::Up => 1,
        }
    }
}

/// Lower clamp of each factor of the product score.
pub const SCORE_EPS: f64 = 1e-6;

/// Per-variable, per-direction averages of objective degradation per unit
/// of fractional distance.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudocostStore {
    sums: Vec<[f64; 2]>,
    counts: Vec<[u32; 2]>,
    reliability: u32,
}

impl PseudocostStore {
    pub fn new(num_vars: usize, reliability: u32) -> Self {
        Self {
            sums: vec![[0.0; 2]; num_vars],
            counts: vec![[0; 2]; num_vars],
            reliability,
        }
    }

    pub fn reliability(&self) -> u32 {
        self.reliability
    }

    /// Records one observed degradation. Negative noise is clamped to zero;
    /// a zero distance carries no per-unit information and is skipped.
    pub fn update(&mut self, var: usize, dir: Direction, degradation: f64, frac_distance: f64) {
        if frac_distance <= 1e-9 || !degradation.is_finite() {
            return;
        }
        let s = dir.slot();
        self.sums[var][s] += degradation.max(0.0) / frac_distance;
        self.counts[var][s] += 1;
    }

    pub fn count(&self, var: usize, dir: Direction) -> u32 {
        self.counts[var][dir.slot()]
    }

    pub fn is_reliable(&self, var: usize) -> bool {
        self.counts[var].iter().all(|&c| c >= self.reliability)
    }

    /// Unit pseudocost; variables without observations borrow the average
    /// over all observed variables, or 1 if there are none.
    pub fn unit(&self, var: usize, dir: Direction) -> f64 {
        let s = dir.slot();
        if self.counts[var][s] > 0 {
            return self.sums[var][s] / self.counts[var][s] as f64;
        }
        let (mut total, mut n) = (0.0, 0);
        for j in 0..self.sums.len() {
            if self.counts[j][s] > 0 {
                total += self.sums[j][s] / self.counts[j][s] as f64;
                n += 1;
            }
        }
        if n > 0 {
            total / n as f64
        } else {
            1.0
        }
    }

    /// Product score for branching on `var` at fractional distances
    /// `(down, up)`.
    pub fn score(&self, var: usize, (down, up): (f64, f64)) -> f64 {
        product_score(
            self.unit(var, Direction::Down) * down,
            self.unit(var, Direction::Up) * up,
        )
    }
}

pub fn product_score(down_gain: f64, up_gain: f64) -> f64 {
    down_gain.max(SCORE_EPS) * up_gain.max(SCORE_EPS)
}
