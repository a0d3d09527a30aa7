use super::*;
use crate::branching::{DiveDirection, Strategy};
use crate::lp::{solve_from_scratch, Basis, BoundSide, Row, Sense};
use crate::model::{example_problem, generate_random, MilpProblem, ObjSense, RandomProfile};
use crate::oracle::enumerate_optimum;

fn scripted_config() -> SearchConfig {
    SearchConfig {
        strategy: Strategy::Priority(vec![0, 1, 2]),
        dive_direction: DiveDirection::Up,
        record_events: true,
        ..SearchConfig::default()
    }
}

fn depth_first_config() -> SearchConfig {
    SearchConfig {
        strategy: Strategy::Bottom,
        trim: false,
        bounding: Bounding::Off,
        node_selection: NodeSelection::DepthFirst,
        dive_direction: DiveDirection::Up,
        record_events: true,
        ..SearchConfig::default()
    }
}

fn node_events(r: &SolveResult) -> Vec<&Event> {
    r.events.iter().filter(|e| e.node.is_some()).collect()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-6
}

#[test]
fn scripted_offshoot_trace() {
    let p = example_problem();
    let r = solve(&p, scripted_config()).unwrap();
    assert_eq!(r.status, SolveStatus::Optimal);
    assert!(close(r.objective.unwrap(), -2.0));
    assert_eq!(r.stats.nodes, 9);
    let nodes = node_events(&r);
    let objs: Vec<Option<f64>> = nodes.iter().map(|e| e.objective).collect();
    let expect = [
        Some(-23.0 / 3.0),
        Some(-6.5),
        Some(-4.0),
        None,
        None,
        Some(-17.0 / 3.0),
        None,
        Some(-2.0),
        None,
    ];
    for (k, (got, want)) in objs.iter().zip(expect).enumerate() {
        match (got, want) {
            (Some(g), Some(w)) => assert!(close(*g, w), "node {}: {g} vs {w}", k + 1),
            (None, None) => {}
            _ => panic!("node {}: {got:?} vs {want:?}", k + 1),
        }
    }
    match &nodes[7].action {
        Action::BranchBottom { flip } => {
            assert_eq!(
                (flip.var, flip.side, flip.value),
                (2, BoundSide::Upper, 0.0)
            )
        }
        a => panic!("node 8 is {a:?}"),
    }
    assert_eq!(r.point.unwrap(), vec![0.0, 1.0, 0.0]);
}

#[test]
fn classic_depth_first_tree() {
    let r = solve(&example_problem(), depth_first_config()).unwrap();
    assert_eq!(r.status, SolveStatus::Optimal);
    assert!(close(r.objective.unwrap(), -2.0));
    assert_eq!(r.stats.nodes, 15);
}

#[test]
fn depth_zero_matches_unlimited() {
    let p = example_problem();
    for depth in [Some(0), Some(1), Some(2), None] {
        let r = solve(
            &p,
            SearchConfig {
                max_dive_depth: depth,
                ..SearchConfig::default()
            },
        )
        .unwrap();
        assert!(close(r.objective.unwrap(), -2.0), "depth {depth:?}");
    }
}

fn d0() -> Offshoot {
    let mut d = Vec::new();
    for (j, obj) in [(0, -6.5), (1, -4.0), (2, f64::INFINITY)] {
        let mut c = BoundChange::lower(j, 1.0);
        c.objective = Some(obj);
        d.push(c);
    }
    let p = example_problem();
    Offshoot {
        id: 0,
        parent: None,
        f: Vec::new(),
        d: d.clone(),
        original_order: d,
        z_top: -23.0 / 3.0,
        top_basis: Basis::slack(p.lp()),
        bottom_basis: Basis::slack(p.lp()),
        dual_info: Some(vec![3.0, 4.0, 2.0]),
        terminal: Terminal::Infeasible,
        disturbed: false,
        selected: false,
        open_node: false,
        seq: 0,
    }
}

fn slots(v: &[BoundChange]) -> Vec<(usize, BoundSide, f64)> {
    v.iter().map(|c| (c.var, c.side, c.value)).collect()
}

#[test]
fn bottom_branch_sets_follow_the_trace() {
    use BoundSide::*;
    let p = example_problem();
    let mut off = d0();
    let f = off.branch_bottom(0);
    assert_eq!(
        slots(&f),
        vec![(1, Lower, 1.0), (2, Lower, 1.0), (0, Upper, 0.0)]
    );
    assert!(
        solve_from_scratch(p.lp(), &bounds_with(&p.lp().global_bounds(), &f))
            .unwrap()
            .status
            .is_infeasible()
    );
    assert!(off.disturbed);

    let f = off.branch_bottom(0);
    assert_eq!(slots(&f), vec![(2, Lower, 1.0), (1, Upper, 0.0)]);
    let out = solve_from_scratch(p.lp(), &bounds_with(&p.lp().global_bounds(), &f)).unwrap();
    assert!(close(out.objective, -17.0 / 3.0));
    assert!(close(out.primal[0], 1.0 / 3.0) && close(out.primal[1], 0.0));

    let f = off.branch_bottom(0);
    assert_eq!(slots(&f), vec![(2, Upper, 0.0)]);
    let out = solve_from_scratch(p.lp(), &bounds_with(&p.lp().global_bounds(), &f)).unwrap();
    assert!(close(out.objective, -2.0));
    assert!(off.d.is_empty());
}

#[test]
fn bottom_branch_on_last_change_keeps_order() {
    let mut off = d0();
    off.branch_bottom(2);
    assert!(!off.disturbed);
    assert_eq!(off.d.len(), 2);
}

#[test]
fn top_branch_moves_change_into_f() {
    use BoundSide::*;
    let mut off = d0();
    let (child, c, exact) = off.branch_top(2);
    assert_eq!(slots(&child), vec![(2, Upper, 0.0)]);
    assert_eq!(c.var, 2);
    assert_eq!(exact, None);
    assert_eq!(slots(&off.f), vec![(2, Lower, 1.0)]);
    assert_eq!(slots(&off.d), vec![(0, Lower, 1.0), (1, Lower, 1.0)]);
    assert!(off.disturbed);

    // twice: F grows by one each time, children partition the parent
    let (child, _, _) = off.branch_top(0);
    assert_eq!(slots(&child), vec![(2, Lower, 1.0), (0, Upper, 0.0)]);
    assert_eq!(off.f.len(), 2);
}

#[test]
fn top_branch_on_first_change_is_exact() {
    let mut off = d0();
    let (_, _, exact) = off.branch_top(0);
    assert_eq!(exact, Some(-6.5));
    assert!(!off.disturbed);
}

#[test]
fn trim_keeps_all_when_every_lower_change_is_used() {
    let mut off = d0();
    let rep = trim(&mut off, f64::INFINITY);
    assert_eq!(rep.method, TrimMethod::None);
    assert_eq!(off.d.len(), 3);
    assert!(!off.disturbed);
}

/// `min 0` over `x1 + x2 <= 1`, three binaries.
fn pair_packing() -> MilpProblem {
    MilpProblem::new(
        "pair",
        ObjSense::Min,
        vec![0.0; 3],
        vec![Row::new(vec![(0, 1.0), (1, 1.0)], Sense::Le, 1.0)],
        vec![0.0; 3],
        vec![1.0; 3],
        vec![true; 3],
    )
    .unwrap()
}

#[test]
fn trim_dual_rule_drops_unused_change() {
    let p = pair_packing();
    let mut off = d0();
    off.d = vec![
        BoundChange::lower(2, 1.0),
        BoundChange::lower(0, 1.0),
        BoundChange::lower(1, 1.0),
    ];
    let all = bounds_with(&p.lp().global_bounds(), &off.d);
    let out = solve_from_scratch(p.lp(), &all).unwrap();
    assert_eq!(out.status, crate::lp::LpStatus::Infeasible);
    off.dual_info = Some(out.dual_info.clone());
    let rep = trim(&mut off, f64::INFINITY);
    assert_eq!(rep.method, TrimMethod::DualRule);
    assert_eq!(rep.removed, 1);
    assert_eq!(off.d.iter().map(|c| c.var).collect::<Vec<_>>(), vec![0, 1]);
    let out = solve_from_scratch(p.lp(), &bounds_with(&p.lp().global_bounds(), &off.d)).unwrap();
    assert!(out.status.is_infeasible());
}

#[test]
fn bottom_pruning_against_dual_rule() {
    let mut objs = d0();
    objs.d[2].objective = Some(-1.0);
    objs.dual_info = None;
    objs.terminal = Terminal::Cutoff;
    // cutoff -2: only the last node is at or above it, nothing to drop
    assert_eq!(bottom_prune_len(&objs.d, -2.0), Some(3));
    let mut a = objs.clone();
    assert_eq!(trim(&mut a, -2.0).method, TrimMethod::None);
    // cutoff -5: the second node already qualifies, the last change goes
    let mut b = objs.clone();
    let rep = trim(&mut b, -5.0);
    assert_eq!((rep.method, rep.removed), (TrimMethod::BottomPruning, 1));
    assert!(!b.disturbed);
    // a dual rule removing just as many wins the tie
    let mut c = objs.clone();
    c.dual_info = Some(vec![1.0, 1.0, 0.0]);
    let rep = trim(&mut c, -5.0);
    assert_eq!((rep.method, rep.removed), (TrimMethod::DualRule, 1));
    assert_eq!(c.d.iter().map(|c| c.var).collect::<Vec<_>>(), vec![0, 1]);
}

#[test]
fn dedup_keeps_tightest() {
    let mut d = vec![
        BoundChange::lower(0, 1.0),
        BoundChange::upper(1, 5.0),
        BoundChange::lower(0, 3.0),
        BoundChange::upper(1, 4.0),
        BoundChange::upper(0, 6.0),
    ];
    assert_eq!(dedup_tightest(&mut d), 2);
    assert_eq!(
        slots(&d),
        vec![
            (0, BoundSide::Lower, 3.0),
            (1, BoundSide::Upper, 4.0),
            (0, BoundSide::Upper, 6.0)
        ]
    );
}

#[test]
fn pool_selects_best_bound_then_fifo() {
    let mut pool = OffshootPool::new(NodeSelection::BestBound);
    let (a, b) = (pool.next_seq(), pool.next_seq());
    pool.insert(10, -17.0 / 3.0, a);
    pool.insert(11, -23.0 / 3.0, b);
    assert_eq!(pool.pop(), Some(11));
    let mut pool = OffshootPool::new(NodeSelection::BestBound);
    for id in 0..3 {
        let s = pool.next_seq();
        pool.insert(id, -1.0, s);
    }
    assert_eq!(pool.pop(), Some(0));
    assert_eq!(pool.pop(), Some(1));
    assert_eq!(pool.pop(), Some(2));
    assert_eq!(pool.pop(), None);
    let mut pool = OffshootPool::new(NodeSelection::BestBound);
    let s = pool.next_seq();
    pool.insert(4, 0.0, s);
    assert_eq!(pool.pop(), Some(4));
}

#[test]
fn pool_purge_and_depth_first() {
    let mut pool = OffshootPool::new(NodeSelection::DepthFirst);
    for (id, z) in [(0, -7.0), (1, -1.0), (2, -3.0)] {
        let s = pool.next_seq();
        pool.insert(id, z, s);
    }
    assert_eq!(pool.min_bound(), Some(-7.0));
    let removed = pool.purge(-2.0, PRUNE_TOL);
    assert_eq!(removed, vec![(1, -1.0)]);
    assert_eq!(pool.pop(), Some(2));
    assert_eq!(pool.pop(), Some(0));
}

#[test]
fn update_cutoff_requires_strict_improvement() {
    let p = example_problem();
    let mut s = Search::new(&p, SearchConfig::default());
    let rep = s.update_cutoff(&[0.0, 1.0, 0.0], -2.0).unwrap();
    assert!(rep.improved);
    assert_eq!(s.cutoff(), -2.0);
    let rep = s.update_cutoff(&[0.0, 1.0, 0.0], -2.0).unwrap();
    assert!(!rep.improved);
    // (1,1,1) violates the first row
    assert!(matches!(
        s.update_cutoff(&[1.0, 1.0, 1.0], -7.0),
        Err(SearchError::InfeasibleCandidate { .. })
    ));
    assert!(matches!(
        s.update_cutoff(&[0.5, 1.0, 0.0], -1.5),
        Err(SearchError::InfeasibleCandidate { .. })
    ));
}

#[test]
fn plunge_on_example_root() {
    let p = example_problem();
    let cfg = SearchConfig {
        plunge: true,
        record_events: true,
        audit: true,
        ..SearchConfig::default()
    };
    let r = solve(&p, cfg).unwrap();
    assert!(close(r.objective.unwrap(), -2.0));
    match &r.events[1].action {
        Action::Plunge { changes } => assert_eq!(*changes, 3),
        a => panic!("expected plunge, got {a:?}"),
    }
    assert!(r.events[1].status.unwrap().is_infeasible());
    assert_eq!(r.audit.violations(), 0);
}

/// A chain instance whose rounding dive is long: `x_j` fractional until the
/// last row binds.
fn long_dive_instance(n: usize) -> MilpProblem {
    let rows = vec![Row::new(
        (0..n).map(|j| (j, 2.0)).collect(),
        Sense::Le,
        n as f64 + 1.0,
    )];
    MilpProblem::new(
        "chain",
        ObjSense::Min,
        (0..n).map(|j| -1.0 - 0.01 * j as f64).collect(),
        rows,
        vec![0.0; n],
        vec![1.0; n],
        vec![true; n],
    )
    .unwrap()
}

#[test]
fn split_pieces_cover_the_dive() {
    let p = long_dive_instance(8);
    let mut d = Vec::new();
    let mut bounds = p.lp().global_bounds();
    let mut solver = crate::lp::LpSolver::new(p.lp());
    let root = solver.solve().unwrap();
    let basis = solver.basis();
    for j in 0..8 {
        let mut c = BoundChange::upper(j, 0.0);
        c.apply(&mut bounds);
        solver.change_bound(j, BoundSide::Upper, 0.0);
        c.objective = Some(solver.solve().unwrap().objective);
        d.push(c);
    }
    let off = Offshoot {
        id: 0,
        parent: None,
        f: Vec::new(),
        d: d.clone(),
        original_order: d.clone(),
        z_top: root.objective,
        top_basis: basis,
        bottom_basis: solver.basis(),
        dual_info: None,
        terminal: Terminal::Cutoff,
        disturbed: false,
        selected: false,
        open_node: false,
        seq: 0,
    };
    let mut s = Search::new(&p, SearchConfig::default());
    let (top, bottom) = s.split_offshoot(off.clone(), 4).unwrap();
    assert_eq!(top.d.len(), 4);
    assert_eq!(bottom.d.len(), 4);
    assert_eq!(top.terminal, Terminal::Open);
    assert_eq!(bottom.terminal, Terminal::Cutoff);
    assert_eq!(bottom.f, d[..4].to_vec());
    assert!(close(bottom.z_top, d[3].objective.unwrap()));
    let mut all = top.d.clone();
    all.extend(bottom.d.clone());
    assert_eq!(all, d);

    let mut disturbed = off;
    disturbed.disturbed = true;
    assert!(s.split_offshoot(disturbed, 4).is_err());
}

fn oracle_objective(p: &MilpProblem) -> Option<f64> {
    let o = enumerate_optimum(p).unwrap();
    (o.status == crate::oracle::OracleStatus::Optimal).then_some(o.objective)
}

#[test]
fn small_splits_keep_the_optimum() {
    let prof = RandomProfile::default();
    for seed in 0..40 {
        let p = generate_random(seed, 9, 4, &prof);
        let want = oracle_objective(&p);
        let r = solve(
            &p,
            SearchConfig {
                split_threshold: 2,
                audit: true,
                ..SearchConfig::default()
            },
        )
        .unwrap();
        assert_eq!(r.objective.is_some(), want.is_some(), "seed {seed}");
        if let (Some(a), Some(b)) = (r.objective, want) {
            assert!(close(a, b), "seed {seed}: {a} vs {b}");
        }
        assert_eq!(r.audit.violations(), 0, "seed {seed}: {:?}", r.audit);
    }
}

#[test]
fn strategies_agree_with_oracle() {
    let prof = RandomProfile {
        continuous: 1,
        ..RandomProfile::default()
    };
    for seed in 0..30 {
        let p = generate_random(seed, 7, 5, &prof);
        let want = oracle_objective(&p);
        for strategy in [
            Strategy::Bottom,
            Strategy::Top,
            Strategy::Pseudo,
            Strategy::PseudoDual,
        ] {
            for bounding in Bounding::ALL {
                let cfg = SearchConfig {
                    strategy: strategy.clone(),
                    bounding,
                    audit: true,
                    ..SearchConfig::default()
                };
                let r = solve(&p, cfg).unwrap();
                match (r.objective, want) {
                    (Some(a), Some(b)) => {
                        assert!(close(a, b), "seed {seed} {strategy}: {a} vs {b}")
                    }
                    (None, None) => assert_eq!(r.status, SolveStatus::Infeasible),
                    (a, b) => panic!("seed {seed} {strategy}: {a:?} vs {b:?}"),
                }
                assert_eq!(r.audit.violations(), 0, "seed {seed}: {:?}", r.audit);
                for s in &r.audit.bounding {
                    assert!(s.reduced_cost <= s.resolve + 1e-6);
                    assert!(s.dual_value <= s.resolve + 1e-6);
                }
            }
        }
    }
}

#[test]
fn infeasible_and_max_sense() {
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
    assert_eq!(
        solve(&q, SearchConfig::default()).unwrap().status,
        SolveStatus::Infeasible
    );

    let k = crate::model::parse_mps(include_str!("../../../../fixtures/knapsack_max.mps")).unwrap();
    let r = solve(&k, SearchConfig::default()).unwrap();
    assert!(close(r.objective.unwrap(), 8.0));
}

#[test]
fn node_limit_reports_limit() {
    let p = generate_random(5, 12, 8, &RandomProfile::default());
    let r = solve(
        &p,
        SearchConfig {
            node_limit: Some(2),
            ..SearchConfig::default()
        },
    )
    .unwrap();
    assert!(matches!(
        r.status,
        SolveStatus::Limit | SolveStatus::Optimal | SolveStatus::Infeasible
    ));
    if r.status == SolveStatus::Limit {
        assert!(r.stats.nodes >= 2);
    }
}

#[test]
fn unbounded_root() {
    let p = MilpProblem::new(
        "u",
        ObjSense::Min,
        vec![-1.0, 0.0],
        vec![Row::new(vec![(0, 1.0), (1, -1.0)], Sense::Le, 0.5)],
        vec![0.0, 0.0],
        vec![f64::INFINITY, f64::INFINITY],
        vec![true, false],
    )
    .unwrap();
    assert_eq!(
        solve(&p, SearchConfig::default()).unwrap().status,
        SolveStatus::Unbounded
    );
}
