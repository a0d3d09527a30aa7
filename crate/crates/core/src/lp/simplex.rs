//! Dense bounded-variable dual simplex.
//!
//! Every row `i` gets a slack `s_i = a_i·x` whose bounds carry the row
//! sense, so the working system is `[A  -I] (x, s) = 0` with all
//! restrictions living in variable bounds. The basis inverse is kept
//! explicitly and updated in product form between refactorizations; the
//! instances this crate targets are small enough that dense storage is
//! the simplest correct choice.

use log::trace;
use serde::{Deserialize, Serialize};

use super::model::{Bounds, LpModel};
use super::outcome::{Basis, LpOutcome, LpStatus, VarStatus};
use super::LpError;

/// Numerical settings of the dual simplex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpConfig {
    /// Primal feasibility tolerance.
    pub feasibility_tol: f64,
    /// Values below this magnitude are treated as zero (reduced costs,
    /// certificate entries, pivot candidates).
    pub zero_tol: f64,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub stall_limit: usize,
    /// Product-form updates between refactorizations.
    pub refactor_interval: usize,
    /// Iteration cap as a multiple of `num_rows + num_vars`.
    pub iteration_factor: usize,
}

impl Default for LpConfig {
    fn default() -> Self {
        Self {
            feasibility_tol: 1e-7,
            zero_tol: 1e-9,
            stall_limit: 50,
            refactor_interval: 64,
            iteration_factor: 100,
        }
    }
}

/// Which side of a variable's domain a bound change tightens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundSide {
    /// `x_j >= value`
    Lower,
    /// `x_j <= value`
    Upper,
}

const PIVOT_TOL: f64 = 1e-9;
const SINGULAR_TOL: f64 = 1e-11;
const MAX_RESTARTS: usize = 4;

enum Loop {
    Optimal,
    Infeasible {
        row: usize,
        sigma: f64,
    },
    IterationLimit,
    /// Numerical drift broke dual feasibility; start over from the current
    /// basis.
    Restart,
}

/// A dual simplex instance bound to one model.
///
/// The solver keeps its basis and factorization between calls, so
/// changing one bound and calling [`LpSolver::solve`] again continues
/// from the previous optimum (hotstart). Loading a stored [`Basis`] and
/// solving is a warmstart.
#[derive(Debug, Clone)]
pub struct LpSolver<'m> {
    model: &'m LpModel,
    config: LpConfig,
    n: usize,
    m: usize,
    cost: Vec<f64>,
    lb: Vec<f64>,
    ub: Vec<f64>,
    status: Vec<VarStatus>,
    head: Vec<usize>,
    binv: Vec<f64>,
    x: Vec<f64>,
    d: Vec<f64>,
    updates: usize,
    factored: bool,
    bland: bool,
    stall: usize,
}

impl<'m> LpSolver<'m> {
    /// Solver over the model's own bounds, starting from the slack basis.
    pub fn new(model: &'m LpModel) -> Self {
        Self::with_config(model, LpConfig::default())
    }

    pub fn with_config(model: &'m LpModel, config: LpConfig) -> Self {
        let n = model.num_vars();
        let m = model.num_rows();
        let mut cost = model.objective().to_vec();
        cost.resize(n + m, 0.0);
        let mut lb = model.lower().to_vec();
        let mut ub = model.upper().to_vec();
        for row in model.rows() {
            let (lo, hi) = row.activity_bounds();
            lb.push(lo);
            ub.push(hi);
        }
        let mut solver = Self {
            model,
            config,
            n,
            m,
            cost,
            lb,
            ub,
            status: Vec::new(),
            head: Vec::new(),
            binv: Vec::new(),
            x: vec![0.0; n + m],
            d: vec![0.0; n + m],
            updates: 0,
            factored: false,
            bland: false,
            stall: 0,
        };
        solver.reset_to_slack_basis();
        solver
    }

    pub fn model(&self) -> &'m LpModel {
        self.model
    }

    pub fn config(&self) -> &LpConfig {
        &self.config
    }

    /// Current working bounds of the structural variables.
    pub fn bounds(&self) -> Bounds {
        Bounds::new(self.lb[..self.n].to_vec(), self.ub[..self.n].to_vec())
    }

    pub fn set_bounds(&mut self, bounds: &Bounds) -> Result<(), LpError> {
        self.model.check_bounds(bounds)?;
        self.lb[..self.n].copy_from_slice(&bounds.lower);
        self.ub[..self.n].copy_from_slice(&bounds.upper);
        Ok(())
    }

    pub fn set_var_bounds(&mut self, var: usize, lower: f64, upper: f64) {
        self.lb[var] = lower;
        self.ub[var] = upper;
    }

    /// Tightens or relaxes a single bound in place.
    pub fn change_bound(&mut self, var: usize, side: BoundSide, value: f64) {
        match side {
            BoundSide::Lower => self.lb[var] = value,
            BoundSide::Upper => self.ub[var] = value,
        }
    }

    pub fn basis(&self) -> Basis {
        Basis {
            cols: self.status[..self.n].to_vec(),
            rows: self.status[self.n..].to_vec(),
        }
    }

    /// Installs a stored basis; it is factorized lazily on the next solve.
    /// An inconsistent basis falls back to the slack basis.
    pub fn load_basis(&mut self, basis: &Basis) {
        if !basis.is_consistent(self.model) {
            self.reset_to_slack_basis();
            return;
        }
        self.status.clear();
        self.status.extend_from_slice(&basis.cols);
        self.status.extend_from_slice(&basis.rows);
        self.head = (0..self.n + self.m)
            .filter(|&j| self.status[j] == VarStatus::Basic)
            .collect();
        self.factored = false;
    }

    pub fn reset_to_slack_basis(&mut self) {
        let basis = Basis::slack(self.model);
        self.status = basis.cols;
        self.status.extend(basis.rows);
        self.head = (self.n..self.n + self.m).collect();
        self.factored = false;
    }

    /// Solves with the default iteration cap.
    pub fn solve(&mut self) -> Result<LpOutcome, LpError> {
        let cap = self.config.iteration_factor * (self.n + self.m).max(1);
        self.solve_capped(cap)
    }

    /// Solves with an explicit iteration cap. On hitting the cap the
    /// outcome has status `IterationLimit` and its objective is the dual
    /// objective of the last basis, which is still a valid lower bound.
    pub fn solve_capped(&mut self, cap: usize) -> Result<LpOutcome, LpError> {
        for j in 0..self.n {
            if self.lb[j] > self.ub[j] + self.config.zero_tol {
                return Err(LpError::BoundConflict {
                    var: j,
                    lower: self.lb[j],
                    upper: self.ub[j],
                });
            }
        }
        self.bland = false;
        self.stall = 0;
        let mut iterations = 0;
        for _ in 0..MAX_RESTARTS {
            if !self.factored {
                self.refactor();
            }
            self.compute_duals();
            if !self.position_nonbasics() {
                match self.phase_one(cap, &mut iterations) {
                    PhaseOne::DualFeasible => {}
                    PhaseOne::Finished(outcome) => return Ok(outcome),
                }
            }
            self.compute_primal();
            match self.dual_loop(cap, &mut iterations) {
                Loop::Optimal => return Ok(self.optimal_outcome(iterations)),
                Loop::Infeasible { row, sigma } => {
                    return Ok(self.infeasible_outcome(row, sigma, iterations))
                }
                Loop::IterationLimit => return Ok(self.limit_outcome(iterations)),
                Loop::Restart => {
                    trace!("dual simplex restart after {iterations} iterations");
                    self.factored = false;
                }
            }
        }
        Ok(self.limit_outcome(iterations))
    }

    // ---- linear algebra -------------------------------------------------

    fn col_dot(&self, j: usize, v: &[f64]) -> f64 {
        if j < self.n {
            self.model.column(j).iter().map(|&(i, a)| a * v[i]).sum()
        } else {
            -v[j - self.n]
        }
    }

    /// `B^{-1} a_j`
    fn ftran(&self, j: usize) -> Vec<f64> {
        let m = self.m;
        let mut out = vec![0.0; m];
        if j < self.n {
            for &(i, a) in self.model.column(j) {
                for (r, o) in out.iter_mut().enumerate() {
                    *o += a * self.binv[r * m + i];
                }
            }
        } else {
            let i = j - self.n;
            for (r, o) in out.iter_mut().enumerate() {
                *o = -self.binv[r * m + i];
            }
        }
        out
    }

    fn refactor(&mut self) {
        if !self.try_factor() {
            trace!("singular basis, falling back to slack basis");
            self.reset_to_slack_basis();
            let ok = self.try_factor();
            debug_assert!(ok);
        }
        self.factored = true;
        self.updates = 0;
    }

    /// Gauss-Jordan inversion of the basis matrix with partial pivoting.
    fn try_factor(&mut self) -> bool {
        let m = self.m;
        if self.head.len() != m {
            return false;
        }
        let mut b = vec![0.0; m * m];
        for (r, &j) in self.head.iter().enumerate() {
            if j < self.n {
                for &(i, a) in self.model.column(j) {
                    b[i * m + r] = a;
                }
            } else {
                b[(j - self.n) * m + r] = -1.0;
            }
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for col in 0..m {
            let mut piv = col;
            let mut best = b[col * m + col].abs();
            for r in col + 1..m {
                let v = b[r * m + col].abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best < SINGULAR_TOL {
                return false;
            }
            if piv != col {
                for k in 0..m {
                    b.swap(col * m + k, piv * m + k);
                    inv.swap(col * m + k, piv * m + k);
                }
            }
            let p = b[col * m + col];
            for k in 0..m {
                b[col * m + k] /= p;
                inv[col * m + k] /= p;
            }
            for r in 0..m {
                if r == col {
                    continue;
                }
                let f = b[r * m + col];
                if f != 0.0 {
                    for k in 0..m {
                        b[r * m + k] -= f * b[col * m + k];
                        inv[r * m + k] -= f * inv[col * m + k];
                    }
                }
            }
        }
        self.binv = inv;
        true
    }

    fn pivot_update(&mut self, p: usize, alpha: &[f64]) {
        let m = self.m;
        let piv = alpha[p];
        for k in 0..m {
            self.binv[p * m + k] /= piv;
        }
        for (r, &f) in alpha.iter().enumerate().take(m) {
            if r == p || f == 0.0 {
                continue;
            }
            for k in 0..m {
                self.binv[r * m + k] -= f * self.binv[p * m + k];
            }
        }
        self.updates += 1;
    }

    fn nonbasic_value(&self, j: usize) -> f64 {
        match self.status[j] {
            VarStatus::AtLower => self.lb[j],
            VarStatus::AtUpper => self.ub[j],
            VarStatus::Free => 0.0,
            VarStatus::Basic => self.x[j],
        }
    }

    fn compute_primal(&mut self) {
        let m = self.m;
        let mut v = vec![0.0; m];
        for j in 0..self.n + self.m {
            if self.status[j] == VarStatus::Basic {
                continue;
            }
            let xj = self.nonbasic_value(j);
            self.x[j] = xj;
            if xj == 0.0 {
                continue;
            }
            if j < self.n {
                for &(i, a) in self.model.column(j) {
                    v[i] += a * xj;
                }
            } else {
                v[j - self.n] -= xj;
            }
        }
        for r in 0..m {
            let s: f64 = self.binv[r * m..(r + 1) * m]
                .iter()
                .zip(&v)
                .map(|(b, vk)| b * vk)
                .sum();
            self.x[self.head[r]] = -s;
        }
    }

    fn row_duals(&self) -> Vec<f64> {
        let m = self.m;
        let mut y = vec![0.0; m];
        for r in 0..m {
            let c = self.cost[self.head[r]];
            if c != 0.0 {
                for (yk, b) in y.iter_mut().zip(&self.binv[r * m..(r + 1) * m]) {
                    *yk += c * b;
                }
            }
        }
        y
    }

    fn compute_duals(&mut self) {
        let y = self.row_duals();
        for j in 0..self.n + self.m {
            self.d[j] = if self.status[j] == VarStatus::Basic {
                0.0
            } else {
                self.cost[j] - self.col_dot(j, &y)
            };
        }
    }

    fn is_fixed(&self, j: usize) -> bool {
        self.lb[j] == self.ub[j]
    }

    /// Places every nonbasic variable at the bound its reduced cost asks
    /// for. Returns false if some variable lacks that bound.
    fn position_nonbasics(&mut self) -> bool {
        let tol = self.config.zero_tol;
        let mut feasible = true;
        for j in 0..self.n + self.m {
            if self.status[j] == VarStatus::Basic {
                continue;
            }
            let (lf, uf) = (self.lb[j].is_finite(), self.ub[j].is_finite());
            let dj = self.d[j];
            self.status[j] = if self.is_fixed(j) {
                VarStatus::AtLower
            } else if dj > tol {
                if !lf {
                    feasible = false;
                }
                VarStatus::AtLower
            } else if dj < -tol {
                if !uf {
                    feasible = false;
                }
                VarStatus::AtUpper
            } else {
                match self.status[j] {
                    VarStatus::AtLower if lf => VarStatus::AtLower,
                    VarStatus::AtUpper if uf => VarStatus::AtUpper,
                    _ if lf => VarStatus::AtLower,
                    _ if uf => VarStatus::AtUpper,
                    _ => VarStatus::Free,
                }
            };
        }
        feasible
    }

    // ---- phase one ------------------------------------------------------

    /// Restores dual feasibility by solving the auxiliary problem over the
    /// box `{boxed: [0,0], lower-only: [0,1], upper-only: [-1,0], free:
    /// [-1,1]}`. An optimal basis of that problem is dual feasible for the
    /// original bounds whenever the original dual is feasible at all.
    fn phase_one(&mut self, cap: usize, iterations: &mut usize) -> PhaseOne {
        let saved_lb = self.lb.clone();
        let saved_ub = self.ub.clone();
        for j in 0..self.n + self.m {
            let (lf, uf) = (saved_lb[j].is_finite(), saved_ub[j].is_finite());
            let (l, u) = match (lf, uf) {
                (true, true) => (0.0, 0.0),
                (true, false) => (0.0, 1.0),
                (false, true) => (-1.0, 0.0),
                (false, false) => (-1.0, 1.0),
            };
            self.lb[j] = l;
            self.ub[j] = u;
        }
        self.position_nonbasics();
        self.compute_primal();
        let aux = self.dual_loop(cap, iterations);
        self.lb = saved_lb;
        self.ub = saved_ub;
        self.bland = false;
        self.stall = 0;
        match aux {
            Loop::Optimal => {}
            Loop::IterationLimit => return PhaseOne::Finished(self.limit_outcome(*iterations)),
            // The auxiliary problem always has the feasible point 0; anything
            // else is numerical trouble.
            Loop::Infeasible { .. } | Loop::Restart => {
                self.factored = false;
                self.refactor();
            }
        }
        self.compute_duals();
        if self.position_nonbasics() {
            return PhaseOne::DualFeasible;
        }

        // Dual infeasible: the relaxation is unbounded if it is feasible.
        // With a zero objective every basis is dual feasible.
        let saved_cost = std::mem::replace(&mut self.cost, vec![0.0; self.n + self.m]);
        self.compute_duals();
        self.position_nonbasics();
        self.compute_primal();
        let feas = self.dual_loop(cap, iterations);
        let outcome = match feas {
            Loop::Infeasible { row, sigma } => {
                self.cost = saved_cost;
                self.infeasible_outcome(row, sigma, *iterations)
            }
            Loop::Optimal => {
                self.cost = saved_cost;
                self.compute_duals();
                LpOutcome {
                    status: LpStatus::Unbounded,
                    objective: f64::NEG_INFINITY,
                    primal: self.x[..self.n].to_vec(),
                    dual_info: vec![0.0; self.n],
                    row_duals: vec![0.0; self.m],
                    basis: self.basis(),
                    iterations: *iterations,
                }
            }
            Loop::IterationLimit | Loop::Restart => {
                self.cost = saved_cost;
                self.limit_outcome(*iterations)
            }
        };
        PhaseOne::Finished(outcome)
    }

    // ---- main loop ------------------------------------------------------

    fn dual_loop(&mut self, cap: usize, iterations: &mut usize) -> Loop {
        let tol = self.config.zero_tol;
        let feas = self.config.feasibility_tol;
        loop {
            if *iterations >= cap {
                return Loop::IterationLimit;
            }
            if self.updates >= self.config.refactor_interval {
                self.refactor();
                self.compute_duals();
                if !self.position_nonbasics() {
                    return Loop::Restart;
                }
                self.compute_primal();
            }

            // leaving row
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.m {
                let j = self.head[r];
                let below = self.lb[j] - self.x[j];
                let above = self.x[j] - self.ub[j];
                let infeas = below.max(above);
                if infeas <= feas {
                    continue;
                }
                let better = match leave {
                    None => true,
                    Some((r0, inf0)) => {
                        if self.bland {
                            j < self.head[r0]
                        } else {
                            infeas > inf0
                        }
                    }
                };
                if better {
                    leave = Some((r, infeas));
                }
            }
            let Some((p, _)) = leave else {
                return Loop::Optimal;
            };
            let leaving = self.head[p];
            let sigma = if self.x[leaving] < self.lb[leaving] {
                -1.0
            } else {
                1.0
            };

            // entering column
            let rho: Vec<f64> = self.binv[p * self.m..(p + 1) * self.m].to_vec();
            let mut cands: Vec<(usize, f64, f64)> = Vec::new();
            for j in 0..self.n + self.m {
                if self.status[j] == VarStatus::Basic || self.is_fixed(j) {
                    continue;
                }
                let alpha = self.col_dot(j, &rho);
                let s = sigma * alpha;
                let slack = match self.status[j] {
                    VarStatus::AtLower if s > PIVOT_TOL => self.d[j].max(0.0),
                    VarStatus::AtUpper if s < -PIVOT_TOL => (-self.d[j]).max(0.0),
                    VarStatus::Free if alpha.abs() > PIVOT_TOL => 0.0,
                    _ => continue,
                };
                cands.push((j, slack, alpha));
            }
            if cands.is_empty() {
                return Loop::Infeasible { row: p, sigma };
            }
            let q = if self.bland {
                let min = cands
                    .iter()
                    .map(|&(_, dd, a)| dd / a.abs())
                    .fold(f64::INFINITY, f64::min);
                cands
                    .iter()
                    .filter(|&&(_, dd, a)| dd / a.abs() <= min + 1e-12)
                    .map(|&(j, _, _)| j)
                    .min()
                    .unwrap()
            } else {
                // Harris two-pass ratio test.
                let bound = cands
                    .iter()
                    .map(|&(_, dd, a)| (dd + tol) / a.abs())
                    .fold(f64::INFINITY, f64::min);
                let mut best: Option<(usize, f64)> = None;
                for &(j, dd, a) in &cands {
                    if dd / a.abs() <= bound && best.is_none_or(|(_, b)| a.abs() > b) {
                        best = Some((j, a.abs()));
                    }
                }
                best.unwrap().0
            };
            let step = cands
                .iter()
                .find(|c| c.0 == q)
                .map(|&(_, dd, a)| dd / a.abs())
                .unwrap();
            if step <= 1e-12 {
                self.stall += 1;
                if self.stall >= self.config.stall_limit {
                    self.bland = true;
                }
            } else {
                self.stall = 0;
            }

            let alpha_q = self.ftran(q);
            if alpha_q[p].abs() < PIVOT_TOL {
                if self.updates == 0 {
                    // freshly factorized and still unusable
                    return Loop::IterationLimit;
                }
                return Loop::Restart;
            }
            self.pivot_update(p, &alpha_q);
            self.status[leaving] = if sigma < 0.0 {
                VarStatus::AtLower
            } else {
                VarStatus::AtUpper
            };
            if self.is_fixed(leaving) {
                self.status[leaving] = VarStatus::AtLower;
            }
            self.status[q] = VarStatus::Basic;
            self.head[p] = q;
            *iterations += 1;

            self.compute_duals();
            if !self.position_nonbasics() {
                return Loop::Restart;
            }
            self.compute_primal();
        }
    }

    // ---- outcomes -------------------------------------------------------

    fn snap(&self, v: f64) -> f64 {
        if v.abs() <= self.config.zero_tol {
            0.0
        } else {
            v
        }
    }

    fn objective(&self) -> f64 {
        (0..self.n).map(|j| self.cost[j] * self.x[j]).sum()
    }

    fn optimal_outcome(&self, iterations: usize) -> LpOutcome {
        LpOutcome {
            status: LpStatus::Optimal,
            objective: self.objective(),
            primal: self.x[..self.n].to_vec(),
            dual_info: (0..self.n).map(|j| self.snap(self.d[j])).collect(),
            row_duals: (self.n..self.n + self.m)
                .map(|j| self.snap(self.d[j]))
                .collect(),
            basis: self.basis(),
            iterations,
        }
    }

    fn limit_outcome(&self, iterations: usize) -> LpOutcome {
        LpOutcome {
            status: LpStatus::IterationLimit,
            objective: self.objective(),
            primal: self.x[..self.n].to_vec(),
            dual_info: vec![0.0; self.n],
            row_duals: vec![0.0; self.m],
            basis: self.basis(),
            iterations,
        }
    }

    /// Builds the Farkas certificate from the row of `B^{-1} [A -I]` that
    /// admitted no entering variable.
    fn infeasible_outcome(&self, p: usize, sigma: f64, iterations: usize) -> LpOutcome {
        let rho = &self.binv[p * self.m..(p + 1) * self.m];
        let mut w: Vec<f64> = (0..self.n + self.m)
            .map(|j| {
                if self.status[j] == VarStatus::Basic {
                    if j == self.head[p] {
                        -sigma
                    } else {
                        0.0
                    }
                } else {
                    -sigma * self.col_dot(j, rho)
                }
            })
            .collect();
        let scale = w[self.n..].iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if scale > 0.0 {
            for v in &mut w {
                *v /= scale;
            }
        }
        for v in &mut w {
            *v = self.snap(*v);
        }
        let dual_info = w[..self.n].to_vec();
        let row_duals = w[self.n..].to_vec();
        let bounds = self.bounds();
        let proof = super::outcome::dual_value(self.model, &bounds, &row_duals, &dual_info);
        let status = if proof > self.config.zero_tol {
            LpStatus::Infeasible
        } else {
            LpStatus::DualUnboundedTreatedAsInfeasible
        };
        LpOutcome {
            status,
            objective: f64::INFINITY,
            primal: self.x[..self.n].to_vec(),
            dual_info,
            row_duals,
            basis: self.basis(),
            iterations,
        }
    }
}

enum PhaseOne {
    DualFeasible,
    Finished(LpOutcome),
}

/// Solves the model over `bounds` starting from the slack basis.
pub fn solve_from_scratch(model: &LpModel, bounds: &Bounds) -> Result<LpOutcome, LpError> {
    let mut solver = LpSolver::new(model);
    solver.set_bounds(bounds)?;
    solver.solve()
}

/// Solves over `bounds` from a stored basis.
pub fn warmstart_solve(
    model: &LpModel,
    bounds: &Bounds,
    basis: &Basis,
) -> Result<LpOutcome, LpError> {
    let mut solver = LpSolver::new(model);
    solver.set_bounds(bounds)?;
    solver.load_basis(basis);
    solver.solve()
}

/// Re-solves after a single bound change, starting from `basis` (which
/// should be optimal or at least dual feasible for `bounds`).
pub fn hotstart_solve(
    model: &LpModel,
    bounds: &Bounds,
    basis: &Basis,
    var: usize,
    side: BoundSide,
    value: f64,
) -> Result<LpOutcome, LpError> {
    let mut solver = LpSolver::new(model);
    solver.set_bounds(bounds)?;
    solver.load_basis(basis);
    solver.change_bound(var, side, value);
    solver.solve()
}
