//! Fixed instance sets for the criterion benchmarks.

use offshoot_core::model::{generate_random, RandomProfile};
use offshoot_core::MilpProblem;

/// `count` pure binary instances with `n` variables and `m` rows.
pub fn binary_corpus(count: u64, n: usize, m: usize) -> Vec<MilpProblem> {
    let profile = RandomProfile::default();
    (0..count)
        .map(|s| generate_random(s, n, m, &profile))
        .collect()
}

/// Same shape with a few continuous columns.
pub fn mixed_corpus(count: u64, n: usize, m: usize) -> Vec<MilpProblem> {
    let profile = RandomProfile {
        continuous: n / 4,
        ..RandomProfile::default()
    };
    (0..count)
        .map(|s| generate_random(1000 + s, n, m, &profile))
        .collect()
}
