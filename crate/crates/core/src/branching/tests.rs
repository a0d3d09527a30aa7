use super::*;
use crate::lp::{solve_from_scratch, Basis, BoundSide, LpSolver, Row, Sense};
use crate::model::{example_problem, generate_random, MilpProblem, ObjSense, RandomProfile};
use crate::search::{BoundChange, Offshoot, Terminal};

#[test]
fn first_update_gives_unit_cost() {
    let mut s = PseudocostStore::new(3, 5);
    s.update(1, Direction::Up, 1.5, 0.5);
    assert_eq!(s.unit(1, Direction::Up), 3.0);
    assert_eq!(s.count(1, Direction::Up), 1);
    assert!(!s.is_reliable(1));
}

#[test]
fn five_updates_each_way_are_reliable() {
    let mut s = PseudocostStore::new(2, 5);
    for k in 0..5 {
        s.update(0, Direction::Down, k as f64, 0.25);
        assert!(!s.is_reliable(0));
        s.update(0, Direction::Up, 1.0, 0.5);
    }
    assert!(s.is_reliable(0));
    assert_eq!(s.unit(0, Direction::Down), 8.0);
}

#[test]
fn zero_distance_and_negative_noise() {
    let mut s = PseudocostStore::new(1, 5);
    s.update(0, Direction::Down, 2.0, 0.0);
    assert_eq!(s.count(0, Direction::Down), 0);
    s.update(0, Direction::Down, -1e-7, 0.5);
    assert_eq!(s.count(0, Direction::Down), 1);
    assert_eq!(s.unit(0, Direction::Down), 0.0);
}

#[test]
fn unobserved_variables_borrow_the_average() {
    let mut s = PseudocostStore::new(3, 5);
    assert_eq!(s.unit(2, Direction::Up), 1.0);
    s.update(0, Direction::Up, 1.0, 0.5);
    s.update(1, Direction::Up, 4.0, 0.5);
    assert_eq!(s.unit(2, Direction::Up), 5.0);
    assert_eq!(s.score(2, (0.5, 0.5)), product_score(0.5, 2.5));
}

fn offshoot(vars: &[usize], dual: Option<Vec<f64>>) -> Offshoot {
    let p = example_problem();
    let d: Vec<BoundChange> = vars
        .iter()
        .map(|&j| {
            let mut c = BoundChange::lower(j, 1.0);
            c.lp_value = 0.5;
            c
        })
        .collect();
    Offshoot {
        id: 0,
        parent: None,
        f: Vec::new(),
        d: d.clone(),
        original_order: d,
        z_top: 0.0,
        top_basis: Basis::slack(p.lp()),
        bottom_basis: Basis::slack(p.lp()),
        dual_info: dual,
        terminal: Terminal::Infeasible,
        disturbed: false,
        selected: false,
        open_node: false,
        seq: 0,
    }
}

#[test]
fn bottom_and_top_strategies() {
    let off = offshoot(&[0, 1, 2], None);
    let store = PseudocostStore::new(3, 5);
    let c = select_offshoot_variable(&off, &Strategy::Bottom, &store);
    assert_eq!((c.change.var, c.side), (2, BranchSide::Bottom));
    let c = select_offshoot_variable(&off, &Strategy::Top, &store);
    assert_eq!((c.change.var, c.side), (0, BranchSide::Top));
}

#[test]
fn pseudodual_falls_back_to_smallest_dual_magnitude() {
    let off = offshoot(&[0, 1, 2], Some(vec![3.0, 4.0, 2.0]));
    let store = PseudocostStore::new(3, 5);
    let c = select_offshoot_variable(&off, &Strategy::PseudoDual, &store);
    assert_eq!((c.change.var, c.side, c.index), (2, BranchSide::Bottom, 2));
    // without dual information it ranks by pseudocost, ties to the lowest index
    let off = offshoot(&[1, 0, 2], None);
    let c = select_offshoot_variable(&off, &Strategy::PseudoDual, &store);
    assert_eq!((c.change.var, c.side), (0, BranchSide::Bottom));
}

#[test]
fn reliable_entries_branch_from_the_top() {
    let off = offshoot(&[0, 1, 2], Some(vec![3.0, 4.0, 2.0]));
    let mut store = PseudocostStore::new(3, 5);
    for _ in 0..5 {
        for j in [1, 2] {
            store.update(j, Direction::Down, j as f64, 0.5);
            store.update(j, Direction::Up, j as f64, 0.5);
        }
    }
    for strategy in [Strategy::Pseudo, Strategy::PseudoDual] {
        let c = select_offshoot_variable(&off, &strategy, &store);
        assert_eq!((c.change.var, c.side), (2, BranchSide::Top), "{strategy}");
    }
    // unreliable: worst pseudocost score goes to the bottom
    let mut store = PseudocostStore::new(3, 5);
    store.update(0, Direction::Down, 3.0, 0.5);
    store.update(1, Direction::Down, 0.5, 0.5);
    store.update(2, Direction::Down, 9.0, 0.5);
    let c = select_offshoot_variable(&off, &Strategy::Pseudo, &store);
    assert_eq!((c.change.var, c.side), (1, BranchSide::Bottom));
}

#[test]
fn priority_strategy_follows_the_script() {
    let off = offshoot(&[2, 0, 1], None);
    let store = PseudocostStore::new(3, 5);
    let c = select_offshoot_variable(&off, &Strategy::Priority(vec![1, 0]), &store);
    assert_eq!((c.change.var, c.index, c.side), (1, 2, BranchSide::Bottom));
    let off = offshoot(&[2], None);
    let c = select_offshoot_variable(&off, &Strategy::Priority(vec![1, 0]), &store);
    assert_eq!(c.change.var, 2);
}

#[test]
fn strategy_names_round_trip() {
    for name in Strategy::NAMED {
        assert_eq!(name.parse::<Strategy>().unwrap().to_string(), name);
    }
    assert!("random".parse::<Strategy>().is_err());
}

#[test]
fn single_fractional_variable_is_taken() {
    let p = example_problem();
    let mut solver = LpSolver::new(p.lp());
    let root = solver.solve().unwrap();
    let mut store = PseudocostStore::new(3, 5);
    let mut rep = StrongReport::default();
    let c = select_dive_variable(
        &solver,
        &root,
        p.integrality(),
        &mut store,
        DiveDirection::Round,
        &StrongBranching::default(),
        &mut rep,
    )
    .unwrap()
    .unwrap();
    assert_eq!((c.var, c.side, c.value), (0, BoundSide::Upper, 0.0));
    assert_eq!(rep.lps, 0);
    let c = select_dive_variable(
        &solver,
        &root,
        p.integrality(),
        &mut store,
        DiveDirection::Up,
        &StrongBranching::default(),
        &mut rep,
    )
    .unwrap()
    .unwrap();
    assert_eq!((c.var, c.side, c.value), (0, BoundSide::Lower, 1.0));
}

/// `min -x0 - 2x1` with `x0 + x1 <= 1.5`, `x1 <= x0`, `x0 + x1 >= 0.9`;
/// the LP optimum is `(0.75, 0.75)` and `x0 <= 0` is infeasible.
fn forcing_instance() -> MilpProblem {
    MilpProblem::new(
        "forcing",
        ObjSense::Min,
        vec![-1.0, -2.0],
        vec![
            Row::new(vec![(0, 1.0), (1, 1.0)], Sense::Le, 1.5),
            Row::new(vec![(0, -1.0), (1, 1.0)], Sense::Le, 0.0),
            Row::new(vec![(0, 1.0), (1, 1.0)], Sense::Ge, 0.9),
        ],
        vec![0.0; 2],
        vec![1.0; 2],
        vec![true; 2],
    )
    .unwrap()
}

#[test]
fn strong_branching_forces_the_feasible_side() {
    let p = forcing_instance();
    let mut solver = LpSolver::new(p.lp());
    let root = solver.solve().unwrap();
    assert!((root.primal[0] - 0.75).abs() < 1e-9 && (root.primal[1] - 0.75).abs() < 1e-9);
    let mut store = PseudocostStore::new(2, 5);
    let mut rep = StrongReport::default();
    let c = select_dive_variable(
        &solver,
        &root,
        p.integrality(),
        &mut store,
        DiveDirection::Down,
        &StrongBranching::default(),
        &mut rep,
    )
    .unwrap()
    .unwrap();
    assert!(c.forced);
    assert_eq!((c.var, c.side, c.value), (0, BoundSide::Lower, 1.0));
    assert_eq!(rep.lps, 2);
    let mut down = p.lp().global_bounds();
    down.upper[0] = 0.0;
    assert!(solve_from_scratch(p.lp(), &down)
        .unwrap()
        .status
        .is_infeasible());
    let mut up = p.lp().global_bounds();
    up.lower[0] = 1.0;
    assert!(solve_from_scratch(p.lp(), &up).unwrap().is_optimal());
}

#[test]
fn reliable_candidates_need_no_strong_branching() {
    let p = forcing_instance();
    let mut solver = LpSolver::new(p.lp());
    let root = solver.solve().unwrap();
    let mut store = PseudocostStore::new(2, 5);
    for _ in 0..5 {
        for j in 0..2 {
            store.update(j, Direction::Down, 1.0 + j as f64, 0.5);
            store.update(j, Direction::Up, 1.0, 0.5);
        }
    }
    let mut rep = StrongReport::default();
    let c = select_dive_variable(
        &solver,
        &root,
        p.integrality(),
        &mut store,
        DiveDirection::Round,
        &StrongBranching::default(),
        &mut rep,
    )
    .unwrap()
    .unwrap();
    assert_eq!(rep.lps, 0);
    assert_eq!(c.var, 1);
    assert!(!c.forced);
}

fn scaled(p: &MilpProblem, factors: &[f64]) -> MilpProblem {
    let rows = p
        .lp()
        .rows()
        .iter()
        .zip(factors.iter().cycle())
        .map(|(r, &s)| {
            Row::new(
                r.coefs.iter().map(|&(j, a)| (j, a * s)).collect(),
                r.sense,
                r.rhs * s,
            )
        })
        .collect();
    MilpProblem::new(
        "scaled",
        ObjSense::Min,
        p.lp().objective().to_vec(),
        rows,
        p.lp().lower().to_vec(),
        p.lp().upper().to_vec(),
        p.integrality().to_vec(),
    )
    .unwrap()
}

fn first_choice(p: &MilpProblem) -> Option<(DiveChoice, usize)> {
    let mut solver = LpSolver::new(p.lp());
    let root = solver.solve().unwrap();
    if !root.is_optimal() {
        return None;
    }
    let n = fractional_candidates(&root.primal, p.integrality()).len();
    let mut store = PseudocostStore::new(p.num_vars(), 5);
    let mut rep = StrongReport::default();
    select_dive_variable(
        &solver,
        &root,
        p.integrality(),
        &mut store,
        DiveDirection::Round,
        &StrongBranching::default(),
        &mut rep,
    )
    .unwrap()
    .map(|c| (c, n))
}

#[test]
fn strong_branching_choice_ignores_row_scaling() {
    let prof = RandomProfile::default();
    let mut compared = 0;
    for seed in 0..60 {
        let p = generate_random(seed, 8, 5, &prof);
        let q = scaled(&p, &[2.0, 0.25, 8.0, 0.5]);
        let (a, b) = (first_choice(&p), first_choice(&q));
        if let (Some((a, n)), Some((b, _))) = (a, b) {
            if n >= 2 {
                compared += 1;
                assert_eq!((a.var, a.side), (b.var, b.side), "seed {seed}");
            }
        }
    }
    assert!(
        compared >= 10,
        "only {compared} instances with a real choice"
    );
}
