//! Dense bounded-variable primal simplex.
//!
//! Every row is turned into an equality by a bounded logical column
//! (`[0, inf)` for `<=`, `(-inf, 0]` for `>=`). Nonbasic columns rest at a
//! finite bound, or at zero when free, and an entering column whose own bound
//! range is the tightest limit simply flips bounds without a basis change.
//! Phase 1 minimizes the sum of artificials; phase 2 fixes them at zero.

use super::{LinearProgram, Relation, Sense, Solution, SolveStatus, SolverConfig, VarId};

/// Solves the continuous relaxation of `lp`. Binary columns are treated as
/// continuous within their bounds.
pub fn solve_lp(lp: &LinearProgram, cfg: &SolverConfig) -> Solution {
    solve_with_bounds(lp, lp.lower(), lp.upper(), cfg)
}

pub(crate) fn solve_with_bounds(
    lp: &LinearProgram,
    lower: &[f64],
    upper: &[f64],
    cfg: &SolverConfig,
) -> Solution {
    let upper_fixed = forced_to_zero(lp, lower, upper);
    let mut iterations = 0;
    let mut imprecise = false;
    for attempt in ATTEMPTS {
        let (mut sol, troubled) = solve_once(lp, lower, &upper_fixed, cfg, attempt);
        iterations += sol.iteration_count;
        sol.iteration_count = iterations;
        match sol.status {
            SolveStatus::Optimal => {
                if relative_violation(lp, &sol.variable_values) <= cfg.feas_tol.max(REPAIR_TOL) {
                    return sol;
                }
                imprecise = true;
            }
            _ if troubled || imprecise => {}
            _ => return sol,
        }
    }
    Solution::without_point(SolveStatus::IterationLimit, iterations)
}

/// Upper bounds with every column of a forcing row fixed at zero. A row
/// `sum(a_j x_j) = 0` (or `<= 0`) whose nonzero coefficients are all positive
/// over columns bounded below by zero admits only `x_j = 0`; solving it
/// numerically instead lets tiny negative values cancel large terms.
fn forced_to_zero(lp: &LinearProgram, lower: &[f64], upper: &[f64]) -> Vec<f64> {
    let mut up = upper.to_vec();
    for row in lp.rows() {
        if row.rhs != 0.0 {
            continue;
        }
        let sign = match row.relation {
            Relation::Le => 1.0,
            Relation::Ge => -1.0,
            Relation::Eq => match row.terms.iter().find(|&&(_, a)| a != 0.0) {
                Some(&(_, a)) => a.signum(),
                None => continue,
            },
        };
        let forcing = row
            .terms
            .iter()
            .all(|&(j, a)| a == 0.0 || (a * sign > 0.0 && lower[j] == 0.0));
        if forcing {
            for &(j, a) in &row.terms {
                if a != 0.0 {
                    up[j] = 0.0;
                }
            }
        }
    }
    up
}

#[derive(Debug, Clone, Copy)]
struct Attempt {
    scale: bool,
    pricing: Pricing,
}

/// Tried in order until one gives a point that satisfies the original program.
const ATTEMPTS: [Attempt; 4] = [
    Attempt { scale: true, pricing: Pricing::Dantzig },
    Attempt { scale: true, pricing: Pricing::Bland },
    Attempt { scale: false, pricing: Pricing::Dantzig },
    Attempt { scale: false, pricing: Pricing::Bland },
];

/// Returns the solution and whether the run lost control of its basis.
fn solve_once(
    lp: &LinearProgram,
    lower: &[f64],
    upper: &[f64],
    cfg: &SolverConfig,
    attempt: Attempt,
) -> (Solution, bool) {
    let scaled = if attempt.scale {
        Scaled::new(lp, lower, upper)
    } else {
        Scaled::identity(lp, lower, upper)
    };
    let mut tab = Tableau::build(&scaled.lp, scaled.lp.lower(), scaled.lp.upper(), cfg);
    tab.pricing = attempt.pricing;
    let status = tab.run_both_phases();
    if status != SolveStatus::Optimal {
        return (Solution::without_point(status, tab.iterations), tab.troubled);
    }
    // Bound slips allowed by the ratio test are clamped, so the rows are
    // checked at a point that honours every bound exactly.
    let x: Vec<f64> = tab.x[..tab.n_struct]
        .iter()
        .zip(&scaled.col)
        .zip(lower.iter().zip(upper))
        .map(|((v, c), (&l, &u))| (v * c).clamp(l, u))
        .collect();
    let sol = Solution {
        status,
        objective_value: lp.evaluate(&x),
        variable_values: x,
        iteration_count: tab.iterations,
        node_count: 0,
    };
    (sol, tab.troubled)
}

/// Largest row violation of `x`, relative to the magnitude of the terms.
fn relative_violation(lp: &LinearProgram, x: &[f64]) -> f64 {
    lp.rows().iter().fold(0.0f64, |worst, row| {
        let (lhs, size) = row
            .terms
            .iter()
            .fold((0.0, 0.0), |(s, m), &(j, a)| (s + a * x[j], m + (a * x[j]).abs()));
        let gap = match row.relation {
            Relation::Le => lhs - row.rhs,
            Relation::Ge => row.rhs - lhs,
            Relation::Eq => (lhs - row.rhs).abs(),
        };
        worst.max(gap / (1.0 + size + row.rhs.abs()))
    })
}

const SCALING_PASSES: usize = 4;

/// Row and column equilibrated copy of a program. Column `j` of the copy
/// holds `x_j / col[j]`; every factor is a power of two, so scaling is exact.
struct Scaled {
    lp: LinearProgram,
    col: Vec<f64>,
}

impl Scaled {
    fn identity(lp: &LinearProgram, lower: &[f64], upper: &[f64]) -> Self {
        let mut copy = lp.clone();
        for (j, (&l, &u)) in lower.iter().zip(upper).enumerate() {
            copy.set_bounds(VarId(j), l, u)
                .expect("branching bounds stay ordered");
        }
        Self {
            lp: copy,
            col: vec![1.0; lp.num_vars()],
        }
    }

    fn new(lp: &LinearProgram, lower: &[f64], upper: &[f64]) -> Self {
        let n = lp.num_vars();
        let rows = lp.rows();
        let mut row = vec![1.0; rows.len()];
        let mut col = vec![1.0; n];
        let spread = |it: &mut dyn Iterator<Item = f64>| {
            let (lo, hi) = it
                .filter(|v| *v != 0.0)
                .fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
            if hi == 0.0 {
                1.0
            } else {
                (1.0 / (lo * hi).sqrt()).log2().round().exp2()
            }
        };
        for _ in 0..SCALING_PASSES {
            for (r, rw) in row.iter_mut().zip(rows) {
                *r = spread(&mut rw.terms.iter().map(|&(j, a)| (a * col[j]).abs()));
            }
            let mut entries: Vec<Vec<f64>> = vec![Vec::new(); n];
            for (r, rw) in row.iter().zip(rows) {
                for &(j, a) in &rw.terms {
                    entries[j].push((a * r).abs());
                }
            }
            for (c, e) in col.iter_mut().zip(&entries) {
                *c = spread(&mut e.iter().copied());
            }
        }

        let mut scaled = LinearProgram::new(lp.sense());
        for j in 0..n {
            scaled
                .add_var(lower[j] / col[j], upper[j] / col[j], lp.objective()[j] * col[j])
                .expect("scaling by a positive factor keeps bounds ordered");
        }
        for (r, rw) in row.iter().zip(rows) {
            let terms: Vec<(VarId, f64)> = rw
                .terms
                .iter()
                .map(|&(j, a)| (VarId(j), a * r * col[j]))
                .collect();
            scaled
                .add_row(&terms, rw.relation, rw.rhs * r)
                .expect("scaled row refers to existing columns");
        }
        Self { lp: scaled, col }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Basic,
    AtLower,
    AtUpper,
    /// Nonbasic free column resting at zero.
    Free,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pricing {
    Dantzig,
    Bland,
}

enum Step {
    Optimal,
    Unbounded,
    Moved,
}

const REFACTOR_INTERVAL: usize = 100;
const RELATIVE_PIVOT_TOL: f64 = 1e-7;
const MAX_REPAIRS: usize = 5;
/// Repairs allowed over a whole solve before the basis is written off.
const MAX_TOTAL_REPAIRS: usize = 20;
const REPAIR_TOL: f64 = 1e-7;
/// Smallest reduced cost, relative to the largest cost, that can certify a ray.
const RAY_TOL: f64 = 1e-7;

struct Tableau<'a> {
    cfg: &'a SolverConfig,
    m: usize,
    n_struct: usize,
    n_cols: usize,
    art_start: usize,
    /// Original constraint matrix over all columns, row major.
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    /// Current `B^-1 A`.
    t: Vec<Vec<f64>>,
    lo: Vec<f64>,
    up: Vec<f64>,
    x: Vec<f64>,
    state: Vec<State>,
    basis: Vec<usize>,
    cost: Vec<f64>,
    /// Reduced costs for `cost` at the current basis.
    d: Vec<f64>,
    iterations: usize,
    since_refactor: usize,
    /// Number of times refactoring exposed bound violations.
    repairs: usize,
    ray_tol: f64,
    /// Pricing rule that `optimize` starts from.
    pricing: Pricing,
    /// Set when refactoring or repair failed rather than the program itself.
    troubled: bool,
}

impl<'a> Tableau<'a> {
    fn build(lp: &LinearProgram, lower: &[f64], upper: &[f64], cfg: &'a SolverConfig) -> Self {
        let m = lp.num_rows();
        let n_struct = lp.num_vars();
        let n_slack = lp
            .rows()
            .iter()
            .filter(|r| r.relation != Relation::Eq)
            .count();
        let art_start = n_struct + n_slack;
        let n_cols = art_start + m;

        let mut a = vec![vec![0.0; n_cols]; m];
        let mut b = vec![0.0; m];
        let mut lo = Vec::with_capacity(n_cols);
        let mut up = Vec::with_capacity(n_cols);
        lo.extend_from_slice(lower);
        up.extend_from_slice(upper);
        let mut slack_of_row = vec![None; m];
        let mut next_slack = n_struct;
        for (i, row) in lp.rows().iter().enumerate() {
            for &(j, coeff) in &row.terms {
                a[i][j] += coeff;
            }
            b[i] = row.rhs;
            match row.relation {
                Relation::Eq => {}
                Relation::Le | Relation::Ge => {
                    a[i][next_slack] = 1.0;
                    slack_of_row[i] = Some(next_slack);
                    next_slack += 1;
                }
            }
        }
        for row in lp.rows() {
            match row.relation {
                Relation::Eq => {}
                Relation::Le => {
                    lo.push(0.0);
                    up.push(f64::INFINITY);
                }
                Relation::Ge => {
                    lo.push(f64::NEG_INFINITY);
                    up.push(0.0);
                }
            }
        }
        lo.extend(std::iter::repeat_n(0.0, m));
        up.extend(std::iter::repeat_n(0.0, m));

        let mut state = vec![State::AtLower; n_cols];
        let mut x = vec![0.0; n_cols];
        for j in 0..art_start {
            let (s, v) = resting_point(lo[j], up[j]);
            state[j] = s;
            x[j] = v;
        }

        let mut basis = vec![0; m];
        for i in 0..m {
            let residual: f64 = b[i]
                - a[i][..art_start]
                    .iter()
                    .zip(&x[..art_start])
                    .map(|(aij, xj)| aij * xj)
                    .sum::<f64>();
            let art = art_start + i;
            let slack_ok = slack_of_row[i].filter(|&k| {
                let v = x[k] + residual;
                v >= lo[k] && v <= up[k]
            });
            if let Some(k) = slack_ok {
                basis[i] = k;
                state[k] = State::Basic;
                x[k] += residual;
                a[i][art] = 1.0;
            } else {
                a[i][art] = if residual < 0.0 { -1.0 } else { 1.0 };
                up[art] = f64::INFINITY;
                basis[i] = art;
                state[art] = State::Basic;
                x[art] = residual.abs();
            }
        }

        let mut phase2_cost = vec![0.0; n_cols];
        let sign = match lp.sense() {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        };
        for (j, &c) in lp.objective().iter().enumerate() {
            phase2_cost[j] = sign * c;
        }

        Self {
            cfg,
            m,
            n_struct,
            n_cols,
            art_start,
            t: a.clone(),
            a,
            b,
            lo,
            up,
            x,
            state,
            basis,
            cost: phase2_cost.clone(),
            d: vec![0.0; n_cols],
            iterations: 0,
            since_refactor: 0,
            repairs: 0,
            pricing: Pricing::Dantzig,
            troubled: false,
            ray_tol: RAY_TOL * (1.0 + phase2_cost.iter().fold(0.0f64, |acc, c| acc.max(c.abs()))),
        }
    }

    fn run_both_phases(&mut self) -> SolveStatus {
        let phase2_cost = std::mem::take(&mut self.cost);
        let needs_phase1 = self.basis.iter().any(|&k| k >= self.art_start);

        if needs_phase1 {
            let mut c1 = vec![0.0; self.n_cols];
            for c in &mut c1[self.art_start..] {
                *c = 1.0;
            }
            self.cost = c1;
            if let Some(status) = self.refresh() {
                return status;
            }
            match self.optimize() {
                // The phase 1 objective is bounded below, so a ray here is
                // rounding: no usable improving column is left.
                SolveStatus::Optimal | SolveStatus::Unbounded => {}
                other => return other,
            }
            let infeasibility: f64 = self.x[self.art_start..].iter().sum();
            let scale = 1.0 + self.b.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            if infeasibility > self.cfg.feas_tol * scale {
                return SolveStatus::Infeasible;
            }
            for j in self.art_start..self.n_cols {
                self.up[j] = 0.0;
                if self.state[j] != State::Basic {
                    self.state[j] = State::AtLower;
                    self.x[j] = 0.0;
                }
            }
            self.drive_out_artificials();
        }

        self.cost = phase2_cost;
        if let Some(status) = self.refresh() {
            return status;
        }
        self.optimize()
    }

    /// Runs simplex iterations on `self.cost` until optimal, unbounded or a limit.
    fn optimize(&mut self) -> SolveStatus {
        let mut pricing = self.pricing;
        let mut degenerate_run = 0usize;
        loop {
            if self.iterations >= self.cfg.max_iterations {
                return SolveStatus::IterationLimit;
            }
            if self.since_refactor >= REFACTOR_INTERVAL {
                if let Some(status) = self.refresh() {
                    return status;
                }
                if self.repairs > 0 {
                    pricing = Pricing::Bland;
                }
            }
            match self.step(pricing, &mut degenerate_run) {
                Step::Moved => {
                    if pricing == Pricing::Dantzig
                        && degenerate_run > self.cfg.degenerate_pivot_limit
                    {
                        pricing = Pricing::Bland;
                    }
                }
                Step::Optimal => {
                    if self.since_refactor == 0 {
                        return SolveStatus::Optimal;
                    }
                    if let Some(status) = self.refresh() {
                        return status;
                    }
                    if self.repairs > 0 {
                        // Dantzig pricing would retrace the path that lost feasibility.
                        pricing = Pricing::Bland;
                    }
                    if self.choose_entering(pricing).is_none() {
                        return SolveStatus::Optimal;
                    }
                }
                Step::Unbounded => return SolveStatus::Unbounded,
            }
        }
    }

    fn choose_entering(&self, pricing: Pricing) -> Option<(usize, f64)> {
        self.choose_entering_except(pricing, &[])
    }

    fn choose_entering_except(&self, pricing: Pricing, rejected: &[usize]) -> Option<(usize, f64)> {
        let tol = self.cfg.pivot_tol;
        let mut best: Option<(usize, f64)> = None;
        let mut best_score = 0.0;
        for j in 0..self.n_cols {
            let dir = match self.state[j] {
                State::Basic => continue,
                _ if self.lo[j] == self.up[j] => continue,
                State::AtLower if self.d[j] < -tol => 1.0,
                State::AtUpper if self.d[j] > tol => -1.0,
                State::Free if self.d[j].abs() > tol => -self.d[j].signum(),
                _ => continue,
            };
            if rejected.contains(&j) {
                continue;
            }
            match pricing {
                Pricing::Bland => return Some((j, dir)),
                Pricing::Dantzig => {
                    let score = self.d[j].abs();
                    if score > best_score {
                        best_score = score;
                        best = Some((j, dir));
                    }
                }
            }
        }
        best
    }

    fn step(&mut self, pricing: Pricing, degenerate_run: &mut usize) -> Step {
        let ptol = self.cfg.pivot_tol;
        let ftol = self.cfg.feas_tol;
        let mut rejected = Vec::new();
        let (q, dir, rate, step, pivot_row) = loop {
            let Some((q, dir)) = self.choose_entering_except(pricing, &rejected) else {
                return Step::Optimal;
            };
            // Rate of change of each basic variable per unit step of the entering one.
            let rate: Vec<f64> = (0..self.m).map(|i| -dir * self.t[i][q]).collect();
            let column_scale = rate.iter().fold(0.0f64, |acc, r| acc.max(r.abs()));
            let threshold = ptol.max(RELATIVE_PIVOT_TOL * column_scale);
            let mut leaving = self.ratio_test(pricing, &rate, threshold);
            let flip_range = self.up[q] - self.lo[q];
            // A small entry is noise only if skipping it is harmless at the
            // step actually taken.
            let planned = leaving.map_or(flip_range, |(_, s)| s.min(flip_range));
            if planned.is_finite() && self.skipped_row_breaks(&rate, planned, ptol, threshold) {
                leaving = self.ratio_test(pricing, &rate, ptol);
            }
            match leaving {
                Some((_, s)) if flip_range.is_finite() && flip_range <= s => {
                    break (q, dir, rate, flip_range, None)
                }
                Some((i, s)) => break (q, dir, rate, s, Some(i)),
                None if flip_range.is_finite() => break (q, dir, rate, flip_range, None),
                None => {
                    // Blocked only by entries at noise level, or improving at a
                    // rate that is itself noise: price another column.
                    if self.ratio_test(pricing, &rate, ptol).is_some()
                        || self.d[q].abs() <= self.ray_tol
                    {
                        rejected.push(q);
                        continue;
                    }
                    return Step::Unbounded;
                }
            }
        };

        self.iterations += 1;
        if step <= ftol {
            *degenerate_run += 1;
        } else {
            *degenerate_run = 0;
        }

        for i in 0..self.m {
            let k = self.basis[i];
            self.x[k] += rate[i] * step;
        }

        match pivot_row {
            None => {
                if dir > 0.0 {
                    self.state[q] = State::AtUpper;
                    self.x[q] = self.up[q];
                } else {
                    self.state[q] = State::AtLower;
                    self.x[q] = self.lo[q];
                }
            }
            Some(r) => {
                self.x[q] += dir * step;
                let p = self.basis[r];
                if rate[r] < 0.0 {
                    self.state[p] = State::AtLower;
                    self.x[p] = self.lo[p];
                } else {
                    self.state[p] = State::AtUpper;
                    self.x[p] = self.up[p];
                }
                self.pivot(r, q);
            }
        }
        Step::Moved
    }

    /// Whether a row whose entry lies in `(ptol, threshold]` would leave its
    /// bounds after `step`.
    fn skipped_row_breaks(&self, rate: &[f64], step: f64, ptol: f64, threshold: f64) -> bool {
        (0..self.m).any(|i| {
            let r = rate[i];
            if r.abs() <= ptol || r.abs() > threshold {
                return false;
            }
            let k = self.basis[i];
            let v = self.x[k] + r * step;
            v < self.lo[k] - self.violation_tol(self.lo[k]) || v > self.up[k] + self.violation_tol(self.up[k])
        })
    }

    fn ratio_test(&self, pricing: Pricing, rate: &[f64], min_pivot: f64) -> Option<(usize, f64)> {
        let ftol = self.cfg.feas_tol;
        let limit = |i: usize, slack: f64| -> Option<f64> {
            let k = self.basis[i];
            let r = rate[i];
            if r.abs() <= min_pivot {
                return None;
            }
            if r < 0.0 && self.lo[k].is_finite() {
                Some(((self.x[k] - self.lo[k] + slack) / -r).max(0.0))
            } else if r > 0.0 && self.up[k].is_finite() {
                Some(((self.up[k] - self.x[k] + slack) / r).max(0.0))
            } else {
                None
            }
        };

        match pricing {
            Pricing::Dantzig => {
                // Harris two-pass: relaxed bound first, then the largest pivot under it.
                let relaxed = (0..self.m)
                    .filter_map(|i| limit(i, ftol))
                    .fold(f64::INFINITY, f64::min);
                let mut pick: Option<usize> = None;
                for i in 0..self.m {
                    if let Some(step) = limit(i, 0.0) {
                        if step <= relaxed
                            && pick.is_none_or(|p| rate[i].abs() > rate[p].abs())
                        {
                            pick = Some(i);
                        }
                    }
                }
                pick.map(|i| (i, limit(i, 0.0).unwrap()))
            }
            Pricing::Bland => {
                let mut pick: Option<(usize, f64)> = None;
                for i in 0..self.m {
                    if let Some(step) = limit(i, 0.0) {
                        let better = match pick {
                            None => true,
                            Some((p, s)) => {
                                step < s - ftol
                                    || (step <= s + ftol && self.basis[i] < self.basis[p])
                            }
                        };
                        if better {
                            pick = Some((i, step));
                        }
                    }
                }
                pick
            }
        }
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let piv = self.t[r][q];
        for v in &mut self.t[r] {
            *v /= piv;
        }
        let pivot_row = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[q];
            if f != 0.0 {
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * p;
                }
                row[q] = 0.0;
            }
        }
        let f = self.d[q];
        if f != 0.0 {
            for (v, p) in self.d.iter_mut().zip(&pivot_row) {
                *v -= f * p;
            }
            self.d[q] = 0.0;
        }
        self.basis[r] = q;
        self.state[q] = State::Basic;
        self.since_refactor += 1;
    }

    /// Pivots zero-valued artificials out of the basis where a structural or
    /// logical column can replace them. Rows where none can are redundant and
    /// keep their artificial fixed at zero.
    fn drive_out_artificials(&mut self) {
        for r in 0..self.m {
            if self.basis[r] < self.art_start {
                continue;
            }
            let mut best: Option<usize> = None;
            for j in 0..self.art_start {
                if self.state[j] == State::Basic {
                    continue;
                }
                let v = self.t[r][j].abs();
                if v > 1e-7 && best.is_none_or(|b| v > self.t[r][b].abs()) {
                    best = Some(j);
                }
            }
            if let Some(q) = best {
                let p = self.basis[r];
                self.state[p] = State::AtLower;
                self.x[p] = 0.0;
                self.pivot(r, q);
            }
        }
        self.refactor();
    }

    /// Rebuilds `B^-1 A`, basic values and reduced costs from the original data.
    /// Returns false if the basis matrix is numerically singular.
    fn refactor(&mut self) -> bool {
        let m = self.m;
        // Gauss-Jordan on [B | A | rhs] with partial pivoting.
        let mut rhs: Vec<f64> = self.b.clone();
        for j in 0..self.n_cols {
            if self.state[j] != State::Basic && self.x[j] != 0.0 {
                for (i, r) in rhs.iter_mut().enumerate() {
                    *r -= self.a[i][j] * self.x[j];
                }
            }
        }
        let mut bmat: Vec<Vec<f64>> = (0..m)
            .map(|i| self.basis.iter().map(|&k| self.a[i][k]).collect())
            .collect();
        let mut t = self.a.clone();
        for col in 0..m {
            let (piv_row, piv_abs) = (col..m)
                .map(|i| (i, bmat[i][col].abs()))
                .fold((col, -1.0), |acc, v| if v.1 > acc.1 { v } else { acc });
            if piv_abs <= 1e-12 {
                return false;
            }
            bmat.swap(col, piv_row);
            t.swap(col, piv_row);
            rhs.swap(col, piv_row);
            let piv = bmat[col][col];
            for v in &mut bmat[col] {
                *v /= piv;
            }
            for v in &mut t[col] {
                *v /= piv;
            }
            rhs[col] /= piv;
            for i in 0..m {
                if i == col {
                    continue;
                }
                let f = bmat[i][col];
                if f == 0.0 {
                    continue;
                }
                let (src_b, src_t, src_r) = (bmat[col].clone(), t[col].clone(), rhs[col]);
                for (v, s) in bmat[i].iter_mut().zip(&src_b) {
                    *v -= f * s;
                }
                for (v, s) in t[i].iter_mut().zip(&src_t) {
                    *v -= f * s;
                }
                rhs[i] -= f * src_r;
            }
        }
        // Row `col` of the reduced system now corresponds to basis position `col`.
        for (i, &k) in self.basis.iter().enumerate() {
            self.x[k] = rhs[i];
            for (r, row) in t.iter_mut().enumerate() {
                row[k] = if r == i { 1.0 } else { 0.0 };
            }
        }
        self.t = t;
        self.reprice();
        self.since_refactor = 0;
        true
    }

    /// Reduced costs of `self.cost` from the current `B^-1 A`.
    fn reprice(&mut self) {
        self.d = self.cost.clone();
        for (i, &k) in self.basis.iter().enumerate() {
            let cb = self.cost[k];
            if cb != 0.0 {
                for (dj, tij) in self.d.iter_mut().zip(&self.t[i]) {
                    *dj -= cb * tij;
                }
            }
        }
        for &k in &self.basis {
            self.d[k] = 0.0;
        }
    }

    /// Refactors, then repairs any bound violations the fresh basic values
    /// reveal. Returns a terminal status if either step fails.
    fn refresh(&mut self) -> Option<SolveStatus> {
        for _ in 0..MAX_REPAIRS {
            if !self.refactor() {
                self.troubled = true;
                return Some(SolveStatus::Infeasible);
            }
            if self.violated().next().is_none() {
                return None;
            }
            self.repairs += 1;
            if self.repairs > MAX_TOTAL_REPAIRS {
                break;
            }
            if let Some(status) = self.repair() {
                self.troubled |= status == SolveStatus::Infeasible;
                return Some(status);
            }
        }
        self.troubled = true;
        Some(SolveStatus::IterationLimit)
    }

    /// Violations below this are rounding left by the Harris ratio test.
    fn violation_tol(&self, bound: f64) -> f64 {
        self.cfg.feas_tol.max(REPAIR_TOL) * (1.0 + bound.abs())
    }

    /// Basic columns outside their bounds, with the bound they should reach.
    fn violated(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.basis.iter().filter_map(|&k| {
            let v = self.x[k];
            if v < self.lo[k] - self.violation_tol(self.lo[k]) {
                Some((k, self.lo[k]))
            } else if v > self.up[k] + self.violation_tol(self.up[k]) {
                Some((k, self.up[k]))
            } else {
                None
            }
        })
    }

    /// Minimizes the total bound violation of the basic columns from the
    /// current basis. Each violated column is boxed between its current value
    /// and the bound it misses, so it stops as soon as it becomes feasible.
    fn repair(&mut self) -> Option<SolveStatus> {
        let saved_cost = std::mem::take(&mut self.cost);
        let (lo0, up0) = (self.lo.clone(), self.up.clone());
        let mut pricing = Pricing::Dantzig;
        let mut degenerate_run = 0usize;
        let outcome = loop {
            if self.iterations >= self.cfg.max_iterations {
                break Some(SolveStatus::IterationLimit);
            }
            self.lo.clone_from(&lo0);
            self.up.clone_from(&up0);
            let targets: Vec<(usize, f64)> = self.violated().collect();
            if targets.is_empty() {
                break None;
            }
            let mut cost = vec![0.0; self.n_cols];
            for (k, bound) in targets {
                let v = self.x[k];
                if v < bound {
                    cost[k] = -1.0;
                    self.lo[k] = v;
                    self.up[k] = bound;
                } else {
                    cost[k] = 1.0;
                    self.lo[k] = bound;
                    self.up[k] = v;
                }
            }
            self.cost = cost;
            self.reprice();
            match self.step(pricing, &mut degenerate_run) {
                Step::Moved => {
                    if pricing == Pricing::Dantzig && degenerate_run > self.cfg.degenerate_pivot_limit {
                        pricing = Pricing::Bland;
                    }
                }
                Step::Optimal | Step::Unbounded => break Some(SolveStatus::Infeasible),
            }
        };
        self.lo = lo0;
        self.up = up0;
        // Columns that left at a temporary bound go back to a real one.
        for j in 0..self.n_cols {
            match self.state[j] {
                State::AtLower | State::AtUpper => {
                    let (s, v) = if (self.x[j] - self.lo[j]).abs() <= (self.x[j] - self.up[j]).abs() {
                        (State::AtLower, self.lo[j])
                    } else {
                        (State::AtUpper, self.up[j])
                    };
                    self.state[j] = s;
                    self.x[j] = v;
                }
                State::Basic | State::Free => {}
            }
        }
        self.cost = saved_cost;
        outcome
    }
}

fn resting_point(lo: f64, up: f64) -> (State, f64) {
    if lo.is_finite() {
        (State::AtLower, lo)
    } else if up.is_finite() {
        (State::AtUpper, up)
    } else {
        (State::Free, 0.0)
    }
}
