use std::collections::HashMap;
use std::time::Instant;

use log::debug;

use crate::branching::{
    fractional_candidates, select_dive_variable, select_offshoot_variable, BranchSide,
    PseudocostStore, StrongBranching, StrongReport,
};
use crate::lp::{
    dual_value, solve_from_scratch, Basis, BoundSide, Bounds, LpModel, LpOutcome, LpSolver,
    LpStatus,
};
use crate::model::MilpProblem;

use super::change::{bounds_with, frac_distances, BoundChange};
use super::config::{Bounding, SearchConfig};
use super::events::{Action, Audit, BoundingSample, Event, OffshootSnapshot, SearchStats};
use super::offshoot::{Offshoot, OffshootPool, Terminal};
use super::trim::{reprune, trim, TrimMethod};
use super::{SearchError, SolveResult, SolveStatus, PRUNE_TOL};

const FEAS_TOL: f64 = 1e-6;
const AUDIT_TOL: f64 = 1e-6;

type TerminalInfo = (Terminal, Option<Vec<f64>>);

/// Best known feasible point, in internal (minimization) terms.
#[derive(Debug, Clone, PartialEq)]
pub struct Incumbent {
    pub point: Vec<f64>,
    pub objective: f64,
    /// Node count when it was found.
    pub node: u64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CutoffReport {
    pub improved: bool,
    /// Pool entries removed by the new cutoff, with their top bounds.
    pub removed: Vec<(usize, f64)>,
}

/// One run of the offshoot search on a problem.
pub struct Search<'p> {
    problem: &'p MilpProblem,
    model: &'p LpModel,
    config: SearchConfig,
    global: Bounds,
    arena: HashMap<usize, Offshoot>,
    next_id: usize,
    pool: OffshootPool,
    cutoff: f64,
    incumbent: Option<Incumbent>,
    pseudocosts: PseudocostStore,
    stats: SearchStats,
    events: Vec<Event>,
    audit: Audit,
    started: Instant,
    dive_iterations: usize,
    dive_lps: usize,
    unbounded: bool,
    limit_hit: bool,
}

impl<'p> Search<'p> {
    pub fn new(problem: &'p MilpProblem, config: SearchConfig) -> Self {
        let model = problem.lp();
        Self {
            problem,
            model,
            global: model.global_bounds(),
            arena: HashMap::new(),
            next_id: 0,
            pool: OffshootPool::new(config.node_selection),
            cutoff: f64::INFINITY,
            incumbent: None,
            pseudocosts: PseudocostStore::new(model.num_vars(), config.reliability),
            stats: SearchStats::default(),
            events: Vec::new(),
            audit: Audit::default(),
            started: Instant::now(),
            dive_iterations: 0,
            dive_lps: 0,
            unbounded: false,
            limit_hit: false,
            config,
        }
    }

    pub fn config(&self) -> &SearchConfig {
        &self.config
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn incumbent(&self) -> Option<&Incumbent> {
        self.incumbent.as_ref()
    }

    pub fn pool(&self) -> &OffshootPool {
        &self.pool
    }

    pub fn offshoot(&self, id: usize) -> Option<&Offshoot> {
        self.arena.get(&id)
    }

    pub fn stats(&self) -> &SearchStats {
        &self.stats
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn pseudocosts(&self) -> &PseudocostStore {
        &self.pseudocosts
    }

    /// Solves the root and processes open offshoots until the pool is empty
    /// or a limit is reached.
    pub fn run(&mut self) -> Result<(), SearchError> {
        self.started = Instant::now();
        let mut solver = LpSolver::new(self.model);
        solver.set_bounds(&self.global)?;
        let out = solver.solve()?;
        self.count_lp(&out, true);
        self.log(true, None, Action::Root, Some(&out));
        match out.status {
            LpStatus::Unbounded => {
                self.unbounded = true;
                return Ok(());
            }
            LpStatus::IterationLimit => {
                return Err(SearchError::IterationLimit {
                    node: self.stats.nodes,
                })
            }
            _ => {}
        }
        self.process_top(solver, Vec::new(), out, None, self.config.max_dive_depth)?;
        while !self.pool.is_empty() {
            if self.out_of_budget() {
                self.limit_hit = true;
                break;
            }
            let id = self.pool.pop().expect("nonempty pool");
            self.process_offshoot(id)?;
        }
        Ok(())
    }

    pub fn into_result(mut self) -> SolveResult {
        self.stats.wall_time = self.started.elapsed();
        let problem = self.problem;
        let status = if self.unbounded {
            SolveStatus::Unbounded
        } else if self.limit_hit {
            SolveStatus::Limit
        } else if self.incumbent.is_some() {
            SolveStatus::Optimal
        } else {
            SolveStatus::Infeasible
        };
        let best_bound = match status {
            SolveStatus::Optimal => self.incumbent.as_ref().map(|i| i.objective),
            SolveStatus::Limit => {
                let open = self.pool.min_bound().unwrap_or(f64::INFINITY);
                Some(open.min(self.cutoff))
            }
            _ => None,
        };
        SolveResult {
            status,
            objective: self
                .incumbent
                .as_ref()
                .map(|i| problem.external_objective(i.objective)),
            point: self.incumbent.map(|i| i.point),
            best_bound: best_bound.map(|b| problem.external_objective(b)),
            stats: self.stats,
            events: self.events,
            audit: self.audit,
        }
    }

    /// Offers a feasible point as a new incumbent. It registers only if it
    /// improves the cutoff by more than the tolerance; the pool is then
    /// purged of every entry whose top bound reaches the new cutoff.
    pub fn update_cutoff(
        &mut self,
        point: &[f64],
        objective: f64,
    ) -> Result<CutoffReport, SearchError> {
        let mut violation = self.model.max_violation(point, &self.global);
        for j in self.problem.integer_vars() {
            violation = violation.max((point[j] - point[j].round()).abs());
        }
        if violation > FEAS_TOL {
            return Err(SearchError::InfeasibleCandidate { violation });
        }
        if objective.is_nan() || objective >= self.cutoff - PRUNE_TOL {
            return Ok(CutoffReport::default());
        }
        self.cutoff = objective;
        self.incumbent = Some(Incumbent {
            point: point.to_vec(),
            objective,
            node: self.stats.nodes,
        });
        self.stats.incumbents += 1;
        debug!("incumbent {objective} at node {}", self.stats.nodes);
        self.log(
            false,
            None,
            Action::Incumbent {
                value: self.ext(objective),
            },
            None,
        );
        let removed = self.pool.purge(self.cutoff, PRUNE_TOL);
        for &(id, z) in &removed {
            self.stats.prunes_by_bound += 1;
            self.log(false, Some(id), Action::Prune { z_top: self.ext(z) }, None);
            if let Some(off) = self.arena.remove(&id) {
                if self.config.audit {
                    self.audit_prune(&off);
                }
            }
        }
        Ok(CutoffReport {
            improved: true,
            removed,
        })
    }

    // ---- node processing ------------------------------------------------

    fn process_offshoot(&mut self, id: usize) -> Result<(), SearchError> {
        let mut off = self.arena.remove(&id).expect("pooled offshoot in arena");
        if self.prunable(off.z_top) {
            self.stats.prunes_by_bound += 1;
            self.log(
                false,
                Some(id),
                Action::Prune {
                    z_top: self.ext(off.z_top),
                },
                None,
            );
            return Ok(());
        }
        if off.open_node {
            return self.restore(off);
        }
        if self.config.trim {
            let report = if off.selected {
                reprune(&mut off, self.cutoff)
            } else {
                trim(&mut off, self.cutoff)
            };
            if report.total() > 0 {
                self.stats.trims += 1;
                self.stats.changes_trimmed += report.total() as u64;
                self.log(
                    false,
                    Some(id),
                    Action::Trim {
                        method: report.method,
                        removed: report.removed,
                        deduped: report.deduped,
                    },
                    None,
                );
            }
            let claims_prunable = (!off.selected && off.terminal != Terminal::Open)
                || report.method == TrimMethod::BottomPruning;
            if self.config.audit && claims_prunable {
                self.audit_trim(&off);
            }
        }
        off.selected = true;
        if off.d.is_empty() {
            return Ok(());
        }
        let choice = select_offshoot_variable(&off, &self.config.strategy, &self.pseudocosts);
        match choice.side {
            BranchSide::Bottom => self.branch_bottom(off, choice.index),
            BranchSide::Top => self.branch_top(off, choice.index),
        }
    }

    fn branch_bottom(&mut self, mut off: Offshoot, idx: usize) -> Result<(), SearchError> {
        let f_new = off.branch_bottom(idx);
        let flip = f_new.last().expect("flip present").clone();
        let parent = off.id;
        let parent_z = off.z_top;
        let basis = off.bottom_basis.clone();
        self.requeue(off);
        let (solver, out) = self.solve_top(&f_new, &basis)?;
        self.log(
            true,
            Some(parent),
            Action::BranchBottom { flip },
            Some(&out),
        );
        if self.config.audit && out.is_optimal() {
            self.audit.monotone_checks += 1;
            if out.objective < parent_z - AUDIT_TOL {
                self.audit.monotone_violations.push(format!(
                    "offshoot {parent}: child top {} below parent top {parent_z}",
                    out.objective
                ));
            }
        }
        match solver {
            Some(s) => self.process_top(s, f_new, out, Some(parent), self.config.max_dive_depth),
            None => Ok(()),
        }
    }

    fn branch_top(&mut self, mut off: Offshoot, idx: usize) -> Result<(), SearchError> {
        let (f_new, c, exact) = off.branch_top(idx);
        let flip = f_new.last().expect("flip present").clone();
        let parent = off.id;
        let (solver, out) = self.solve_top(&f_new, &off.top_basis)?;
        self.log(true, Some(parent), Action::BranchTop { flip }, Some(&out));

        let old = off.z_top;
        let mut z = old;
        if let Some(e) = exact {
            z = z.max(e);
        }
        if out.is_optimal() && !off.d.is_empty() {
            let bound = self.strengthen_top_bound(&mut off, &f_new, &c, &out)?;
            z = z.max(bound);
        }
        if z > old {
            off.z_top = z;
            self.log(
                false,
                Some(parent),
                Action::Strengthen {
                    old: self.ext(old),
                    new: self.ext(z),
                },
                None,
            );
        }
        self.requeue(off);
        match solver {
            Some(s) => self.process_top(s, f_new, out, Some(parent), self.config.max_dive_depth),
            None => Ok(()),
        }
    }

    /// Lower bound on the LP value of `parent`'s new top node (whose `F` now
    /// holds `c`) from the just-solved sibling top `child`, using the
    /// configured method. In audit mode all three methods are evaluated.
    fn strengthen_top_bound(
        &mut self,
        parent: &mut Offshoot,
        child_f: &[BoundChange],
        c: &BoundChange,
        child: &LpOutcome,
    ) -> Result<f64, SearchError> {
        let parent_box = bounds_with(&self.global, &parent.f);
        let child_box = bounds_with(&self.global, child_f);
        let model = self.model;
        let m1 = || reduced_cost_bound(child, c.var, &child_box, &parent_box);
        let m2 = || dual_value(model, &parent_box, &child.row_duals, &child.dual_info);
        let bound = match self.config.bounding {
            Bounding::Off => f64::NEG_INFINITY,
            Bounding::ReducedCost => m1(),
            Bounding::DualValue => m2(),
            Bounding::Resolve => self.resolve_top(parent, &parent_box, &child.basis, true)?,
        };
        if self.config.audit {
            let resolve = if self.config.bounding == Bounding::Resolve {
                bound
            } else {
                self.resolve_top(parent, &parent_box, &child.basis, false)?
            };
            self.audit.bounding.push(BoundingSample {
                reduced_cost: m1(),
                dual_value: m2(),
                resolve,
            });
        }
        Ok(bound)
    }

    /// Exact LP value over `bounds` warmstarted from `basis`; `+inf` if
    /// infeasible.
    fn resolve_top(
        &mut self,
        parent: &mut Offshoot,
        bounds: &Bounds,
        basis: &Basis,
        counted: bool,
    ) -> Result<f64, SearchError> {
        let mut solver = LpSolver::new(self.model);
        solver.set_bounds(bounds)?;
        solver.load_basis(basis);
        let out = solver.solve()?;
        if counted {
            self.count_lp(&out, false);
            self.log(false, Some(parent.id), Action::BoundResolve, Some(&out));
        }
        match out.status {
            LpStatus::Optimal => {
                if counted {
                    parent.top_basis = out.basis;
                }
                Ok(out.objective)
            }
            s if s.is_infeasible() => Ok(f64::INFINITY),
            _ => Err(SearchError::IterationLimit {
                node: self.stats.nodes,
            }),
        }
    }

    fn restore(&mut self, off: Offshoot) -> Result<(), SearchError> {
        let bounds = bounds_with(&self.global, &off.f);
        let mut solver = LpSolver::new(self.model);
        solver.set_bounds(&bounds)?;
        solver.load_basis(&off.top_basis);
        let out = solver.solve()?;
        self.count_lp(&out, false);
        self.log(false, Some(off.id), Action::Restore, Some(&out));
        self.check_status(&out)?;
        let limit = self.config.max_dive_depth.map(|l| l.max(1));
        self.process_top(solver, off.f, out, Some(off.id), limit)
    }

    /// Handles a freshly solved top node: prune, record an incumbent, or
    /// dive.
    fn process_top(
        &mut self,
        solver: LpSolver<'p>,
        f: Vec<BoundChange>,
        out: LpOutcome,
        parent: Option<usize>,
        limit: Option<usize>,
    ) -> Result<(), SearchError> {
        self.check_status(&out)?;
        if out.status.is_infeasible() || self.prunable(out.objective) {
            return Ok(());
        }
        if self.is_integral(&out) {
            self.record_incumbent(&out)?;
            return Ok(());
        }
        self.dive_from(solver, f, out, parent, limit)
    }

    fn dive_from(
        &mut self,
        mut solver: LpSolver<'p>,
        f: Vec<BoundChange>,
        top: LpOutcome,
        parent: Option<usize>,
        limit: Option<usize>,
    ) -> Result<(), SearchError> {
        let id = self.alloc_id();
        let z_top = top.objective;
        let top_basis = solver.basis();
        let mut changes: Vec<BoundChange> = Vec::new();
        let mut cur = top;
        let (terminal, dual) = if self.config.plunge && limit != Some(0) {
            self.plunge(&mut solver, &mut cur, id, &mut changes)?
        } else {
            self.dive_steps(&mut solver, &mut cur, id, &mut changes, limit)?
        };
        let bottom_basis = solver.basis();

        if changes.is_empty() {
            self.push_open_node(id, parent, f, z_top, top_basis);
            return Ok(());
        }
        if terminal == Terminal::Open {
            let nid = self.alloc_id();
            let mut nf = f.clone();
            nf.extend(changes.iter().cloned());
            self.push_open_node(nid, Some(id), nf, cur.objective, bottom_basis.clone());
        }
        if self.config.audit && terminal != Terminal::Open {
            self.audit.offshoots.push(OffshootSnapshot {
                f: f.clone(),
                d: changes.clone(),
                terminal,
                cutoff: self.cutoff,
            });
        }
        let off = Offshoot {
            id,
            parent,
            f,
            d: changes.clone(),
            original_order: changes,
            z_top,
            top_basis,
            bottom_basis,
            dual_info: dual,
            terminal,
            disturbed: false,
            selected: false,
            open_node: false,
            seq: 0,
        };
        self.stats.offshoots += 1;
        self.log(
            false,
            Some(id),
            Action::NewOffshoot {
                dive_len: off.dive_len(),
                terminal,
                z_top: self.ext(z_top),
            },
            None,
        );
        for piece in self.split_recursive(off)? {
            self.enqueue(piece);
        }
        Ok(())
    }

    /// Single-change dive steps until a prunable node or the limit.
    fn dive_steps(
        &mut self,
        solver: &mut LpSolver<'p>,
        cur: &mut LpOutcome,
        id: usize,
        changes: &mut Vec<BoundChange>,
        limit: Option<usize>,
    ) -> Result<(Terminal, Option<Vec<f64>>), SearchError> {
        loop {
            if limit.is_some_and(|l| changes.len() >= l) || self.out_of_budget() {
                return Ok((Terminal::Open, None));
            }
            let strong = StrongBranching {
                enabled: self.config.strong_branching,
                max_candidates: self.config.strong_candidates,
                iteration_cap: self.strong_cap(),
            };
            let mut report = StrongReport::default();
            let choice = select_dive_variable(
                solver,
                cur,
                self.problem.integrality(),
                &mut self.pseudocosts,
                self.config.dive_direction,
                &strong,
                &mut report,
            )?
            .ok_or_else(|| SearchError::Contract("dive step at an integral node".into()))?;
            self.stats.strong_branch_lps += report.lps as u64;
            self.stats.lp_solves += report.lps as u64;
            self.stats.lp_iterations += report.iterations as u64;

            solver.change_bound(choice.var, choice.side, choice.value);
            let out = solver.solve()?;
            self.count_lp(&out, true);
            self.check_status(&out)?;
            self.dive_iterations += out.iterations;
            self.dive_lps += 1;
            let mut c = BoundChange::new(choice.var, choice.side, choice.value, choice.lp_value);
            if out.is_optimal() {
                let (down, up) = frac_distances(choice.lp_value);
                let dist = match choice.side {
                    BoundSide::Upper => down,
                    BoundSide::Lower => up,
                };
                self.pseudocosts.update(
                    choice.var,
                    choice.direction(),
                    out.objective - cur.objective,
                    dist,
                );
            }
            c.objective = Some(if out.is_optimal() {
                out.objective
            } else {
                f64::INFINITY
            });
            self.log(
                true,
                Some(id),
                Action::Dive {
                    var: c.var,
                    side: c.side,
                    value: c.value,
                },
                Some(&out),
            );
            changes.push(c);
            if let Some(result) = self.classify_terminal(&out)? {
                *cur = out;
                return Ok(result);
            }
            *cur = out;
        }
    }

    /// Fixes every unfixed integer variable at its rounded LP value and
    /// solves once.
    fn plunge(
        &mut self,
        solver: &mut LpSolver<'p>,
        cur: &mut LpOutcome,
        id: usize,
        changes: &mut Vec<BoundChange>,
    ) -> Result<(Terminal, Option<Vec<f64>>), SearchError> {
        let b = solver.bounds();
        for j in self.problem.integer_vars() {
            let (lo, hi) = (b.lower[j], b.upper[j]);
            if lo == hi {
                continue;
            }
            let v = cur.primal[j];
            let r = v.round().clamp(lo, hi);
            if r > lo {
                changes.push(BoundChange::new(j, BoundSide::Lower, r, v));
                solver.change_bound(j, BoundSide::Lower, r);
            }
            if r < hi {
                changes.push(BoundChange::new(j, BoundSide::Upper, r, v));
                solver.change_bound(j, BoundSide::Upper, r);
            }
        }
        let out = solver.solve()?;
        self.count_lp(&out, true);
        self.check_status(&out)?;
        if let Some(last) = changes.last_mut() {
            last.objective = Some(if out.is_optimal() {
                out.objective
            } else {
                f64::INFINITY
            });
        }
        self.log(
            true,
            Some(id),
            Action::Plunge {
                changes: changes.len(),
            },
            Some(&out),
        );
        let result = self.classify_terminal(&out)?;
        *cur = out;
        Ok(result.unwrap_or((Terminal::Open, None)))
    }

    /// Terminal kind and usable dual information of a dive node, or `None`
    /// if the dive should continue.
    fn classify_terminal(&mut self, out: &LpOutcome) -> Result<Option<TerminalInfo>, SearchError> {
        if out.status.is_infeasible() {
            let dual = (out.status == LpStatus::Infeasible).then(|| out.dual_info.clone());
            return Ok(Some((Terminal::Infeasible, dual)));
        }
        if self.prunable(out.objective) {
            return Ok(Some((Terminal::Cutoff, Some(out.dual_info.clone()))));
        }
        if self.is_integral(out) {
            self.record_incumbent(out)?;
            let dual = self.prunable(out.objective).then(|| out.dual_info.clone());
            return Ok(Some((Terminal::Cutoff, dual)));
        }
        Ok(None)
    }

    /// Splits dives longer than the threshold at their midpoint, repeatedly.
    fn split_recursive(&mut self, off: Offshoot) -> Result<Vec<Offshoot>, SearchError> {
        let n = off.d.len();
        if n < 2 || n <= self.config.split_threshold || off.disturbed {
            return Ok(vec![off]);
        }
        let (top, bottom) = self.split_offshoot(off, n / 2)?;
        let mut pieces = self.split_recursive(top)?;
        pieces.extend(self.split_recursive(bottom)?);
        Ok(pieces)
    }

    /// Splits an undisturbed offshoot after its `k`-th dive change. The
    /// upper piece keeps `F` and the first `k` changes (it ends in an
    /// unpruned node); the lower piece starts at that node, whose LP is
    /// re-solved for its top bound, and inherits the terminal.
    pub fn split_offshoot(
        &mut self,
        off: Offshoot,
        k: usize,
    ) -> Result<(Offshoot, Offshoot), SearchError> {
        if off.disturbed || k == 0 || k >= off.d.len() {
            return Err(SearchError::Contract(format!(
                "offshoot {} cannot be split at {k}",
                off.id
            )));
        }
        let head: Vec<BoundChange> = off.d[..k].to_vec();
        let tail: Vec<BoundChange> = off.d[k..].to_vec();
        let mut bottom_f = off.f.clone();
        bottom_f.extend(head.iter().cloned());
        let bounds = bounds_with(&self.global, &bottom_f);
        let mut solver = LpSolver::new(self.model);
        solver.set_bounds(&bounds)?;
        solver.load_basis(&off.bottom_basis);
        let out = solver.solve()?;
        self.count_lp(&out, false);
        let bottom_id = self.alloc_id();
        self.log(false, Some(bottom_id), Action::SplitTop, Some(&out));
        let z = if out.is_optimal() {
            out.objective
        } else {
            head.last().and_then(|c| c.objective).unwrap_or(off.z_top)
        };
        self.stats.splits += 1;
        self.stats.offshoots += 1;
        let bottom = Offshoot {
            id: bottom_id,
            parent: Some(off.id),
            f: bottom_f,
            d: tail.clone(),
            original_order: tail,
            z_top: z,
            top_basis: out.basis.clone(),
            bottom_basis: off.bottom_basis.clone(),
            dual_info: off.dual_info.clone(),
            terminal: off.terminal,
            disturbed: false,
            selected: false,
            open_node: false,
            seq: 0,
        };
        let top = Offshoot {
            d: head.clone(),
            original_order: head,
            bottom_basis: out.basis,
            dual_info: None,
            terminal: Terminal::Open,
            ..off
        };
        Ok((top, bottom))
    }

    // ---- pool bookkeeping ----------------------------------------------

    fn alloc_id(&mut self) -> usize {
        let id = self.next_id;
        self.next_id += 1;
        id
    }

    fn enqueue(&mut self, mut off: Offshoot) {
        if self.prunable(off.z_top) {
            self.stats.prunes_by_bound += 1;
            self.log(
                false,
                Some(off.id),
                Action::Prune {
                    z_top: self.ext(off.z_top),
                },
                None,
            );
            return;
        }
        off.seq = self.pool.next_seq();
        self.pool.insert(off.id, off.z_top, off.seq);
        self.arena.insert(off.id, off);
    }

    /// Puts a branched offshoot back unless it is exhausted or pruned.
    fn requeue(&mut self, off: Offshoot) {
        if off.d.is_empty() {
            return;
        }
        if self.prunable(off.z_top) {
            self.stats.prunes_by_bound += 1;
            self.log(
                false,
                Some(off.id),
                Action::Prune {
                    z_top: self.ext(off.z_top),
                },
                None,
            );
            return;
        }
        self.pool.insert(off.id, off.z_top, off.seq);
        self.arena.insert(off.id, off);
    }

    fn push_open_node(
        &mut self,
        id: usize,
        parent: Option<usize>,
        f: Vec<BoundChange>,
        z: f64,
        basis: Basis,
    ) {
        self.stats.open_nodes += 1;
        self.log(false, Some(id), Action::OpenNode { z: self.ext(z) }, None);
        self.enqueue(Offshoot {
            id,
            parent,
            f,
            d: Vec::new(),
            original_order: Vec::new(),
            z_top: z,
            top_basis: basis.clone(),
            bottom_basis: basis,
            dual_info: None,
            terminal: Terminal::Open,
            disturbed: false,
            selected: false,
            open_node: true,
            seq: 0,
        });
    }

    // ---- LP helpers -----------------------------------------------------

    /// Solves a new top node from `basis`. Contradictory bounds give an
    /// infeasible outcome without an LP (and no solver).
    fn solve_top(
        &mut self,
        f: &[BoundChange],
        basis: &Basis,
    ) -> Result<(Option<LpSolver<'p>>, LpOutcome), SearchError> {
        let bounds = bounds_with(&self.global, f);
        if bounds.first_conflict(PRUNE_TOL).is_some() {
            self.stats.nodes += 1;
            let out = LpOutcome {
                status: LpStatus::DualUnboundedTreatedAsInfeasible,
                objective: f64::INFINITY,
                primal: Vec::new(),
                dual_info: Vec::new(),
                row_duals: Vec::new(),
                basis: basis.clone(),
                iterations: 0,
            };
            return Ok((None, out));
        }
        let mut solver = LpSolver::new(self.model);
        solver.set_bounds(&bounds)?;
        solver.load_basis(basis);
        let out = solver.solve()?;
        self.count_lp(&out, true);
        self.check_status(&out)?;
        Ok((Some(solver), out))
    }

    fn count_lp(&mut self, out: &LpOutcome, node: bool) {
        self.stats.lp_solves += 1;
        self.stats.lp_iterations += out.iterations as u64;
        if node {
            self.stats.nodes += 1;
        }
    }

    fn check_status(&self, out: &LpOutcome) -> Result<(), SearchError> {
        match out.status {
            LpStatus::IterationLimit => Err(SearchError::IterationLimit {
                node: self.stats.nodes,
            }),
            LpStatus::Unbounded => Err(SearchError::UnboundedNode {
                node: self.stats.nodes,
            }),
            _ => Ok(()),
        }
    }

    fn strong_cap(&self) -> usize {
        let avg = self.dive_iterations.checked_div(self.dive_lps).unwrap_or(0);
        (2 * avg).max(50)
    }

    fn prunable(&self, objective: f64) -> bool {
        objective >= self.cutoff - PRUNE_TOL
    }

    fn is_integral(&self, out: &LpOutcome) -> bool {
        fractional_candidates(&out.primal, self.problem.integrality()).is_empty()
    }

    fn record_incumbent(&mut self, out: &LpOutcome) -> Result<(), SearchError> {
        let mut x = out.primal.clone();
        for j in self.problem.integer_vars() {
            x[j] = x[j].round();
        }
        let (point, objective) = if self.model.max_violation(&x, &self.global) <= FEAS_TOL {
            let obj = self.model.objective_value(&x);
            (x, obj)
        } else {
            (out.primal.clone(), out.objective)
        };
        match self.update_cutoff(&point, objective) {
            Ok(_) => Ok(()),
            Err(SearchError::InfeasibleCandidate { violation }) => {
                debug!("integral LP point rejected, violation {violation:e}");
                Ok(())
            }
            Err(e) => Err(e),
        }
    }

    fn out_of_budget(&self) -> bool {
        self.config
            .time_limit
            .is_some_and(|t| self.started.elapsed() >= t)
            || self
                .config
                .node_limit
                .is_some_and(|n| self.stats.nodes >= n)
    }

    fn ext(&self, v: f64) -> f64 {
        self.problem.external_objective(v)
    }

    fn log(
        &mut self,
        node: bool,
        offshoot: Option<usize>,
        action: Action,
        out: Option<&LpOutcome>,
    ) {
        if !self.config.record_events {
            return;
        }
        let seq = self.events.len();
        self.events.push(Event {
            seq,
            node: node.then_some(self.stats.nodes),
            offshoot,
            action,
            status: out.map(|o| o.status),
            objective: out
                .filter(|o| o.is_optimal())
                .map(|o| self.problem.external_objective(o.objective)),
        });
    }

    // ---- audits ---------------------------------------------------------

    fn audit_trim(&mut self, off: &Offshoot) {
        self.audit.trim_checks += 1;
        let bounds = bounds_with(&self.global, off.f.iter().chain(&off.d));
        if bounds.first_conflict(PRUNE_TOL).is_some() {
            return;
        }
        match solve_from_scratch(self.model, &bounds) {
            Ok(out) if out.status.is_infeasible() => {}
            Ok(out) if out.is_optimal() && out.objective >= self.cutoff - AUDIT_TOL => {}
            Ok(out) => self.audit.trim_violations.push(format!(
                "offshoot {}: F ∪ D resolves to {:?} {} with cutoff {}",
                off.id, out.status, out.objective, self.cutoff
            )),
            Err(e) => self
                .audit
                .trim_violations
                .push(format!("offshoot {}: {e}", off.id)),
        }
    }

    fn audit_prune(&mut self, off: &Offshoot) {
        self.audit.prune_checks += 1;
        let bounds = bounds_with(&self.global, &off.f);
        if bounds.first_conflict(PRUNE_TOL).is_some() {
            return;
        }
        match solve_from_scratch(self.model, &bounds) {
            Ok(out) if out.status.is_infeasible() => {}
            Ok(out) if out.is_optimal() && out.objective >= self.cutoff - AUDIT_TOL => {}
            Ok(out) => self.audit.prune_violations.push(format!(
                "offshoot {} removed with top LP {:?} {} below cutoff {}",
                off.id, out.status, out.objective, self.cutoff
            )),
            Err(e) => self
                .audit
                .prune_violations
                .push(format!("offshoot {}: {e}", off.id)),
        }
    }
}

/// `z_child` with variable `var`'s reduced-cost term moved from the child's
/// bounds to the parent's.
pub fn reduced_cost_bound(
    child: &LpOutcome,
    var: usize,
    child_box: &Bounds,
    parent_box: &Bounds,
) -> f64 {
    let r = child.dual_info[var];
    let term = |b: &Bounds| {
        if r > 0.0 {
            r * b.lower[var]
        } else if r < 0.0 {
            r * b.upper[var]
        } else {
            0.0
        }
    };
    child.objective - term(child_box) + term(parent_box)
}

/// Runs the search to completion.
pub fn solve(problem: &MilpProblem, config: SearchConfig) -> Result<SolveResult, SearchError> {
    let mut search = Search::new(problem, config);
    search.run()?;
    Ok(search.into_result())
}
