//! Linear and mixed-binary programming.
//!
//! [`solve_lp`] is a dense two-phase primal simplex that keeps nonbasic
//! variables at either of their bounds, so finite upper bounds never become
//! rows. [`solve_milp`] wraps it in a deterministic branch-and-bound over the
//! binary columns. Every optimization model in this crate goes through these
//! two entry points.

mod lp;
mod milp;
mod simplex;

pub use lp::{LinearProgram, Relation, Row, Sense, VarId};
pub use milp::solve_milp;
pub use simplex::solve_lp;

use thiserror::Error;

/// Construction-time errors. Solve-time outcomes are reported through
/// [`SolveStatus`] instead.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid bounds: {0}")]
    Bounds(String),
    #[error("invalid solver configuration: {0}")]
    Config(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// Out of iterations, or no strategy reached a point that satisfies the
    /// program to tolerance.
    IterationLimit,
    NodeLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub status: SolveStatus,
    /// Objective in the program's own sense. Meaningful only when optimal.
    pub objective_value: f64,
    /// One value per column. Empty unless a point was found.
    pub variable_values: Vec<f64>,
    pub iteration_count: usize,
    pub node_count: usize,
}

impl Solution {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }

    pub fn value(&self, var: VarId) -> f64 {
        self.variable_values[var.index()]
    }

    pub(crate) fn without_point(status: SolveStatus, iterations: usize) -> Self {
        Self {
            status,
            objective_value: f64::NAN,
            variable_values: Vec::new(),
            iteration_count: iterations,
            node_count: 0,
        }
    }
}

/// Tolerances and limits shared by every solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Primal feasibility tolerance on rows and bounds.
    pub feas_tol: f64,
    /// Smallest pivot element accepted, also the reduced-cost optimality threshold.
    pub pivot_tol: f64,
    /// Distance from {0, 1} at which a binary counts as integral.
    pub int_tol: f64,
    /// Values below this magnitude are reported as zero.
    pub zero_tol: f64,
    /// Linking constant for indicator constraints.
    pub big_m: f64,
    /// Width of the window a lexicographic stage optimum is pinned to.
    pub lex_pin_tol: f64,
    pub max_iterations: usize,
    pub max_nodes: usize,
    /// Consecutive degenerate pivots tolerated before switching to Bland's rule.
    pub degenerate_pivot_limit: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            feas_tol: 1e-9,
            pivot_tol: 1e-9,
            int_tol: 1e-6,
            zero_tol: 1e-7,
            big_m: 1e5,
            lex_pin_tol: 1e-9,
            max_iterations: 50_000,
            max_nodes: 200_000,
            degenerate_pivot_limit: 50,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        let tols = [
            ("feas_tol", self.feas_tol),
            ("pivot_tol", self.pivot_tol),
            ("int_tol", self.int_tol),
            ("zero_tol", self.zero_tol),
            ("lex_pin_tol", self.lex_pin_tol),
        ];
        for (name, v) in tols {
            if !(v > 0.0 && v.is_finite()) {
                return Err(SolverError::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.big_m > 1.0 && self.big_m.is_finite()) {
            return Err(SolverError::Config(format!(
                "big_m must exceed 1, got {}",
                self.big_m
            )));
        }
        if self.max_iterations == 0 || self.max_nodes == 0 {
            return Err(SolverError::Config("iteration and node limits must be nonzero".into()));
        }
        Ok(())
    }
}
