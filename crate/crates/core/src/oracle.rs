//! Brute-force reference optimum.
//!
//! Enumerates every integral assignment of the integer variables in
//! lexicographic order starting from the lower bounds. Pure integer
//! problems are checked row by row without any LP; mixed problems solve
//! one LP over the continuous variables per assignment.

use thiserror::Error;

use crate::lp::{solve_from_scratch, LpError, LpStatus};
use crate::model::MilpProblem;

/// Largest number of assignments the oracle agrees to enumerate.
pub const MAX_ASSIGNMENTS: u64 = 1 << 20;

const FEAS_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleStatus {
    Optimal,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub status: OracleStatus,
    /// Optimal objective in the problem's own sense (`NaN` if infeasible).
    pub objective: f64,
    pub point: Option<Vec<f64>>,
    pub evaluated: u64,
}

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("integer variable {0} has an infinite bound")]
    Unbounded(usize),
    #[error("{0} assignments exceed the enumeration cap")]
    TooLarge(u128),
    #[error("continuous relaxation of an assignment is unbounded")]
    UnboundedContinuous,
    #[error("LP failure during enumeration: {0}")]
    Lp(#[from] LpError),
    #[error("LP iteration limit during enumeration")]
    IterationLimit,
}

pub fn enumerate_optimum(problem: &MilpProblem) -> Result<OracleResult, OracleError> {
    let lp = problem.lp();
    let ints: Vec<usize> = problem.integer_vars().collect();
    let mut total: u128 = 1;
    for &j in &ints {
        let (l, u) = (lp.lower()[j], lp.upper()[j]);
        if !l.is_finite() || !u.is_finite() {
            return Err(OracleError::Unbounded(j));
        }
        total = total.saturating_mul((u - l) as u128 + 1);
    }
    if total > MAX_ASSIGNMENTS as u128 {
        return Err(OracleError::TooLarge(total));
    }
    let mixed = ints.len() < problem.num_vars();
    let costs = lp.objective();

    let mut point: Vec<f64> = lp.lower().to_vec();
    for (j, v) in point.iter_mut().enumerate() {
        if !problem.is_integral(j) {
            *v = 0.0;
        }
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut evaluated = 0u64;
    let mut bounds = lp.global_bounds();
    loop {
        evaluated += 1;
        let candidate = if mixed {
            for &j in &ints {
                bounds.lower[j] = point[j];
                bounds.upper[j] = point[j];
            }
            let out = solve_from_scratch(lp, &bounds)?;
            match out.status {
                LpStatus::Optimal => {
                    let mut x = out.primal;
                    for &j in &ints {
                        x[j] = point[j];
                    }
                    Some((out.objective, x))
                }
                LpStatus::Infeasible | LpStatus::DualUnboundedTreatedAsInfeasible => None,
                LpStatus::Unbounded => return Err(OracleError::UnboundedContinuous),
                LpStatus::IterationLimit => return Err(OracleError::IterationLimit),
            }
        } else {
            let feasible = lp.rows().iter().all(|row| {
                let act = row.activity(&point);
                let (lo, hi) = row.activity_bounds();
                act >= lo - FEAS_TOL && act <= hi + FEAS_TOL
            });
            feasible.then(|| {
                let obj: f64 = costs.iter().zip(&point).map(|(c, x)| c * x).sum();
                (obj, point.clone())
            })
        };
        if let Some((obj, x)) = candidate {
            if best.as_ref().is_none_or(|(b, _)| obj < b - 1e-9) {
                best = Some((obj, x));
            }
        }

        // odometer over the integer variables, last one fastest
        let mut k = ints.len();
        loop {
            if k == 0 {
                return Ok(finish(problem, best, evaluated));
            }
            k -= 1;
            let j = ints[k];
            if point[j] < lp.upper()[j] {
                point[j] += 1.0;
                break;
            }
            point[j] = lp.lower()[j];
        }
    }
}

fn finish(problem: &MilpProblem, best: Option<(f64, Vec<f64>)>, evaluated: u64) -> OracleResult {
    match best {
        Some((obj, x)) => OracleResult {
            status: OracleStatus::Optimal,
            objective: problem.external_objective(obj),
            point: Some(x),
            evaluated,
        },
        None => OracleResult {
            status: OracleStatus::Infeasible,
            objective: f64::NAN,
            point: None,
            evaluated,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{Row, Sense};
    use crate::model::{example_problem, generate_random, parse_mps, ObjSense, RandomProfile};

    #[test]
    fn example_optimum() {
        let r = enumerate_optimum(&example_problem()).unwrap();
        assert_eq!(r.status, OracleStatus::Optimal);
        assert_eq!(r.objective, -2.0);
        assert_eq!(r.point.unwrap(), vec![0.0, 1.0, 0.0]);
        assert_eq!(r.evaluated, 8);
    }

    #[test]
    fn contradictory_row_is_infeasible() {
        let p = example_problem();
        let mut rows = p.lp().rows().to_vec();
        rows.push(Row::new(vec![(1, 1.0)], Sense::Le, -1.0));
        let q = MilpProblem::new(
            "inf",
            ObjSense::Min,
            p.lp().objective().to_vec(),
            rows,
            vec![0.0; 3],
            vec![1.0; 3],
            vec![true; 3],
        )
        .unwrap();
        let r = enumerate_optimum(&q).unwrap();
        assert_eq!(r.status, OracleStatus::Infeasible);
        assert_eq!(r.evaluated, 8);
    }

    #[test]
    fn mixed_knapsack() {
        let p = parse_mps(include_str!("../../../fixtures/knapsack_max.mps")).unwrap();
        let r = enumerate_optimum(&p).unwrap();
        assert_eq!(r.objective, 8.0);
        assert_eq!(r.evaluated, 8);
    }

    #[test]
    fn refuses_unbounded_and_oversized() {
        let p = MilpProblem::new(
            "u",
            ObjSense::Min,
            vec![1.0],
            vec![],
            vec![0.0],
            vec![f64::INFINITY],
            vec![true],
        )
        .unwrap();
        assert!(matches!(
            enumerate_optimum(&p),
            Err(OracleError::Unbounded(0))
        ));
        let big = generate_random(3, 21, 1, &RandomProfile::default());
        assert!(matches!(
            enumerate_optimum(&big),
            Err(OracleError::TooLarge(_))
        ));
    }

    #[test]
    fn count_is_product_of_domains() {
        let p = MilpProblem::new(
            "g",
            ObjSense::Max,
            vec![1.0, 1.0],
            vec![Row::new(vec![(0, 1.0), (1, 2.0)], Sense::Le, 5.0)],
            vec![0.0, -1.0],
            vec![3.0, 2.0],
            vec![true, true],
        )
        .unwrap();
        let r = enumerate_optimum(&p).unwrap();
        assert_eq!(r.evaluated, 16);
        // x = (3, 1) gives 4; (3,1): 3 + 2 = 5 <= 5
        assert_eq!(r.objective, 4.0);
    }
}
