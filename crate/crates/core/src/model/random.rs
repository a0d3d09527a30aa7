use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lp::{Row, Sense};

use super::problem::{MilpProblem, ObjSense};

/// Shape of generated instances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomProfile {
    /// Probability that a row references a given variable.
    pub density: f64,
    /// Row coefficients are integers in `[-coef_max, coef_max] \ {0}`.
    pub coef_max: i32,
    /// Objective coefficients are integers in `[-obj_max, obj_max]`.
    pub obj_max: i32,
    /// Number of trailing continuous variables (bounded in `[0, 4]`).
    pub continuous: usize,
    /// Probability of an equality row.
    pub equality_rate: f64,
}

impl Default for RandomProfile {
    fn default() -> Self {
        Self {
            density: 0.6,
            coef_max: 9,
            obj_max: 9,
            continuous: 0,
            equality_rate: 0.05,
        }
    }
}

/// Deterministic random instance: binary integer variables, optional
/// bounded continuous ones, integral data.
pub fn generate_random(
    seed: u64,
    n_vars: usize,
    n_rows: usize,
    profile: &RandomProfile,
) -> MilpProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = n_vars.max(1);
    let n_cont = profile.continuous.min(n);
    let integral: Vec<bool> = (0..n).map(|j| j < n - n_cont).collect();
    let upper: Vec<f64> = integral
        .iter()
        .map(|&int| {
            if int {
                1.0
            } else {
                rng.gen_range(1..=4) as f64
            }
        })
        .collect();
    let objective: Vec<f64> = (0..n)
        .map(|_| rng.gen_range(-profile.obj_max..=profile.obj_max) as f64)
        .collect();

    let mut rows = Vec::with_capacity(n_rows);
    for _ in 0..n_rows {
        let mut coefs: Vec<(usize, f64)> = Vec::new();
        for j in 0..n {
            if rng.gen_bool(profile.density.clamp(0.0, 1.0)) {
                let mut a = rng.gen_range(1..=profile.coef_max.max(1));
                if rng.gen_bool(0.5) {
                    a = -a;
                }
                coefs.push((j, a as f64));
            }
        }
        if coefs.is_empty() {
            let j = rng.gen_range(0..n);
            coefs.push((j, rng.gen_range(1..=profile.coef_max.max(1)) as f64));
        }
        let (lo, hi) = coefs.iter().fold((0.0, 0.0), |(lo, hi), &(j, a)| {
            if a > 0.0 {
                (lo, hi + a * upper[j])
            } else {
                (lo + a * upper[j], hi)
            }
        });
        let (sense, rhs) = if rng.gen_bool(profile.equality_rate.clamp(0.0, 1.0)) {
            // equal to the activity of a random integral point
            let act: f64 = coefs
                .iter()
                .map(|&(j, a)| a * rng.gen_range(0..=upper[j] as i64) as f64)
                .sum();
            (Sense::Eq, act)
        } else {
            let t: f64 = rng.gen_range(0.2..0.8);
            let rhs = (lo + t * (hi - lo)).round();
            if rng.gen_bool(0.5) {
                (Sense::Le, rhs)
            } else {
                (Sense::Ge, rhs)
            }
        };
        rows.push(Row::new(coefs, sense, rhs));
    }
    MilpProblem::new(
        format!("rand-s{seed}-n{n}-m{n_rows}"),
        ObjSense::Min,
        objective,
        rows,
        vec![0.0; n],
        upper,
        integral,
    )
    .expect("generated instances are well formed")
}
