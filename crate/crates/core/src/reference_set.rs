//! Maximal closest reference set at a projection.
//!
//! For a frontier point `(x^, y^)` the LP
//!
//! ```text
//! max  sum_{k=1}^{t+1} alpha_k
//! s.t. sum_{k<=t} (alpha_k + beta_k) (x_k, y_k, 1) - (alpha_{t+1} + beta_{t+1}) (x^, y^, 1) = 0
//!      0 <= alpha_k <= 1,  beta_k >= 0
//! ```
//!
//! pushes `alpha_k` to 1 for every efficient unit that can carry weight in
//! some convex representation of the point. Dividing by the last aggregate
//! gives intensities with the largest possible support.

use crate::data::Dataset;
use crate::efficiency::EfficientSet;
use crate::error::AnalysisError;
use crate::projection::Projection;
use crate::solver::{solve_lp, LinearProgram, Relation, Sense, SolveStatus, SolverConfig, VarId};

/// Values below this are treated as zero without comment.
const BORDERLINE_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Model15Solution {
    /// Length `t + 1`; the last entry belongs to the projection column.
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct McrsResult {
    pub dmu: usize,
    /// Over `J_E`, in set order.
    pub lambda_max: Vec<f64>,
    /// Dataset indices of the reference units.
    pub mcrs: Vec<usize>,
    pub ucrs_sample: Vec<usize>,
    pub warnings: Vec<String>,
}

pub fn solve_model15(
    dataset: &Dataset,
    efficient: &EfficientSet,
    projection: &Projection,
    cfg: &SolverConfig,
) -> Result<Model15Solution, AnalysisError> {
    let name = &dataset.dmu(projection.dmu).name;
    solve_model15_at(
        dataset,
        efficient,
        &projection.target_inputs,
        &projection.target_outputs,
        name,
        cfg,
    )
}

/// Same LP for an arbitrary point given by its coordinates.
pub fn solve_model15_at(
    dataset: &Dataset,
    efficient: &EfficientSet,
    x: &[f64],
    y: &[f64],
    label: &str,
    cfg: &SolverConfig,
) -> Result<Model15Solution, AnalysisError> {
    let t = efficient.len();
    let mut lp = LinearProgram::new(Sense::Maximize);
    let alpha: Vec<VarId> = (0..=t)
        .map(|_| lp.add_var(0.0, 1.0, 1.0))
        .collect::<Result<_, _>>()?;
    let beta: Vec<VarId> = (0..=t)
        .map(|_| lp.add_var(0.0, f64::INFINITY, 0.0))
        .collect::<Result<_, _>>()?;

    let column = |row: &dyn Fn(usize) -> f64| -> Vec<(VarId, f64)> {
        let mut terms = Vec::with_capacity(2 * (t + 1));
        for k in 0..t {
            let v = row(efficient.members()[k]);
            terms.push((alpha[k], v));
            terms.push((beta[k], v));
        }
        terms
    };
    for i in 0..dataset.num_inputs() {
        let mut terms = column(&|j| dataset.dmu(j).inputs[i]);
        terms.push((alpha[t], -x[i]));
        terms.push((beta[t], -x[i]));
        lp.add_row(&terms, Relation::Eq, 0.0)?;
    }
    for r in 0..dataset.num_outputs() {
        let mut terms = column(&|j| dataset.dmu(j).outputs[r]);
        terms.push((alpha[t], -y[r]));
        terms.push((beta[t], -y[r]));
        lp.add_row(&terms, Relation::Eq, 0.0)?;
    }
    let mut terms = column(&|_| 1.0);
    terms.push((alpha[t], -1.0));
    terms.push((beta[t], -1.0));
    lp.add_row(&terms, Relation::Eq, 0.0)?;

    let sol = solve_lp(&lp, cfg);
    if sol.status != SolveStatus::Optimal {
        return Err(AnalysisError::from_status(label, "maximal reference LP", None, sol.status));
    }
    Ok(Model15Solution {
        alpha: alpha.iter().map(|&v| sol.value(v)).collect(),
        beta: beta.iter().map(|&v| sol.value(v)).collect(),
        objective: sol.objective_value,
    })
}

/// Normalizes the aggregates of an optimal solution into intensities.
pub fn recover_lambda_max(sol: &Model15Solution, cfg: &SolverConfig) -> Result<Vec<f64>, AnalysisError> {
    let t = sol.alpha.len() - 1;
    let denom = sol.alpha[t] + sol.beta[t];
    if denom < 1.0 - cfg.feas_tol {
        return Err(AnalysisError::Internal {
            dmu: String::new(),
            model: "maximal reference LP",
            stage: None,
            message: format!("projection aggregate {denom} is below one"),
        });
    }
    Ok((0..t)
        .map(|k| ((sol.alpha[k] + sol.beta[k]) / denom).max(0.0))
        .collect())
}

pub fn identify_mcrs(
    dataset: &Dataset,
    efficient: &EfficientSet,
    projection: &Projection,
    cfg: &SolverConfig,
) -> Result<McrsResult, AnalysisError> {
    let name = &dataset.dmu(projection.dmu).name;
    let sol = solve_model15(dataset, efficient, projection, cfg)?;
    let lambda_max = recover_lambda_max(&sol, cfg).map_err(|e| match e {
        AnalysisError::Internal {
            model,
            stage,
            message,
            ..
        } => AnalysisError::Internal {
            dmu: name.clone(),
            model,
            stage,
            message,
        },
        other => other,
    })?;

    let mut mcrs = Vec::new();
    let mut warnings = Vec::new();
    for (&j, &l) in efficient.members().iter().zip(&lambda_max) {
        if l > cfg.zero_tol {
            mcrs.push(j);
        } else if l > BORDERLINE_FLOOR {
            warnings.push(format!(
                "weight {l:.3e} of {} is below the membership threshold {:.1e}",
                dataset.dmu(j).name,
                cfg.zero_tol
            ));
        }
    }
    Ok(McrsResult {
        dmu: projection.dmu,
        lambda_max,
        mcrs,
        ucrs_sample: projection.ucrs.clone(),
        warnings,
    })
}
