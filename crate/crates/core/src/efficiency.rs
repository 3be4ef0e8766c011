//! Input-oriented BCC envelopment evaluation.
//!
//! The non-Archimedean objective `theta - eps * sum(slacks)` is realised in
//! two phases: minimize `theta`, then fix it and maximize the slack sum.

use crate::data::Dataset;
use crate::error::AnalysisError;
use crate::solver::{solve_lp, LinearProgram, Relation, Sense, SolveStatus, SolverConfig, VarId};

#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyResult {
    pub dmu: usize,
    pub theta: f64,
    /// Input excesses then output shortfalls, maximal at `theta`.
    pub slacks: Vec<f64>,
    /// Intensities over every unit of the dataset; sums to one.
    pub lambda: Vec<f64>,
    pub is_efficient: bool,
}

impl EfficiencyResult {
    /// Frontier point `sum(lambda_j * (x_j, y_j))`.
    pub fn projection(&self, dataset: &Dataset) -> (Vec<f64>, Vec<f64>) {
        let mut x = vec![0.0; dataset.num_inputs()];
        let mut y = vec![0.0; dataset.num_outputs()];
        for (dmu, &l) in dataset.dmus().iter().zip(&self.lambda) {
            for (acc, v) in x.iter_mut().zip(&dmu.inputs) {
                *acc += l * v;
            }
            for (acc, v) in y.iter_mut().zip(&dmu.outputs) {
                *acc += l * v;
            }
        }
        (x, y)
    }
}

/// Indices of the efficient units, in dataset order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EfficientSet {
    members: Vec<usize>,
}

impl EfficientSet {
    pub fn new(members: Vec<usize>) -> Self {
        Self { members }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.members.contains(&j)
    }

    /// Position of dataset index `j` inside the set.
    pub fn position(&self, j: usize) -> Option<usize> {
        self.members.iter().position(|&k| k == j)
    }
}

pub fn evaluate_bcc(
    dataset: &Dataset,
    o: usize,
    cfg: &SolverConfig,
) -> Result<EfficiencyResult, AnalysisError> {
    let dmu = dataset.dmu(o);
    let mut res = evaluate_point(dataset, &dmu.inputs, &dmu.outputs, &dmu.name, cfg)?;
    res.dmu = o;
    Ok(res)
}

/// Evaluates an arbitrary point `(x, y)` against the technology spanned by `dataset`.
pub fn evaluate_point(
    dataset: &Dataset,
    x: &[f64],
    y: &[f64],
    label: &str,
    cfg: &SolverConfig,
) -> Result<EfficiencyResult, AnalysisError> {
    let m = dataset.num_inputs();
    let s = dataset.num_outputs();
    let n = dataset.len();

    let mut lp = LinearProgram::new(Sense::Minimize);
    // A zero input vector has no radial contraction; theta stays at 1 and the
    // slack phase alone decides.
    let theta = if x.iter().all(|&v| v == 0.0) {
        lp.add_var(1.0, 1.0, 1.0)?
    } else {
        lp.add_var(f64::NEG_INFINITY, f64::INFINITY, 1.0)?
    };
    let lambda: Vec<VarId> = (0..n)
        .map(|_| lp.add_var(0.0, f64::INFINITY, 0.0))
        .collect::<Result<_, _>>()?;
    let slack: Vec<VarId> = (0..m + s)
        .map(|_| lp.add_var(0.0, f64::INFINITY, 0.0))
        .collect::<Result<_, _>>()?;

    for i in 0..m {
        let mut terms: Vec<(VarId, f64)> = dataset
            .dmus()
            .iter()
            .zip(&lambda)
            .map(|(d, &l)| (l, d.inputs[i]))
            .collect();
        terms.push((slack[i], 1.0));
        terms.push((theta, -x[i]));
        lp.add_row(&terms, Relation::Eq, 0.0)?;
    }
    for r in 0..s {
        let mut terms: Vec<(VarId, f64)> = dataset
            .dmus()
            .iter()
            .zip(&lambda)
            .map(|(d, &l)| (l, d.outputs[r]))
            .collect();
        terms.push((slack[m + r], -1.0));
        lp.add_row(&terms, Relation::Eq, y[r])?;
    }
    let convexity: Vec<(VarId, f64)> = lambda.iter().map(|&l| (l, 1.0)).collect();
    lp.add_row(&convexity, Relation::Eq, 1.0)?;

    let phase1 = solve_lp(&lp, cfg);
    if phase1.status != SolveStatus::Optimal {
        return Err(AnalysisError::from_status(label, "radial efficiency", Some(1), phase1.status));
    }
    let theta_star = phase1.value(theta);

    let mut lp2 = lp.clone();
    lp2.set_cost(theta, 0.0);
    for &sv in &slack {
        lp2.set_cost(sv, -1.0);
    }
    lp2.set_bounds(theta, theta_star, theta_star)?;
    let mut phase2 = solve_lp(&lp2, cfg);
    // Pinning theta exactly can leave a feasible set thinner than rounding.
    if phase2.status != SolveStatus::Optimal {
        lp2.set_bounds(theta, theta_star, theta_star + cfg.feas_tol)?;
        phase2 = solve_lp(&lp2, cfg);
    }
    if phase2.status != SolveStatus::Optimal {
        return Err(AnalysisError::from_status(label, "max-slack completion", Some(2), phase2.status));
    }

    let slacks: Vec<f64> = slack.iter().map(|&v| phase2.value(v).max(0.0)).collect();
    let lambda_star: Vec<f64> = lambda.iter().map(|&v| phase2.value(v).max(0.0)).collect();
    // Slacks are judged against the magnitude of their own row, so rescaling
    // a column never changes the verdict.
    let magnitude = |pick: &dyn Fn(&crate::data::Dmu) -> f64, own: f64| {
        dataset.dmus().iter().map(|d| pick(d).abs()).fold(own.abs(), f64::max)
    };
    let zero_slacks = slacks.iter().enumerate().all(|(k, &v)| {
        let scale = if k < m {
            magnitude(&|d| d.inputs[k], x[k])
        } else {
            magnitude(&|d| d.outputs[k - m], y[k - m])
        };
        v <= cfg.zero_tol * scale.max(f64::MIN_POSITIVE)
    });
    let is_efficient = theta_star >= 1.0 - cfg.zero_tol && zero_slacks;
    Ok(EfficiencyResult {
        dmu: usize::MAX,
        theta: theta_star,
        slacks,
        lambda: lambda_star,
        is_efficient,
    })
}

/// Evaluates every unit and collects the efficient ones.
pub fn efficient_set(dataset: &Dataset, cfg: &SolverConfig) -> Result<EfficientSet, AnalysisError> {
    let results = evaluate_all(dataset, cfg)?;
    Ok(efficient_set_from(&results))
}

pub fn evaluate_all(
    dataset: &Dataset,
    cfg: &SolverConfig,
) -> Result<Vec<EfficiencyResult>, AnalysisError> {
    (0..dataset.len()).map(|o| evaluate_bcc(dataset, o, cfg)).collect()
}

pub fn efficient_set_from(results: &[EfficiencyResult]) -> EfficientSet {
    EfficientSet::new(
        results
            .iter()
            .filter(|r| r.is_efficient)
            .map(|r| r.dmu)
            .collect(),
    )
}

/// Optimal value of the multiplier form with zero lower bounds on the
/// weights. By LP duality it equals the phase-1 score.
pub fn multiplier_score(dataset: &Dataset, o: usize, cfg: &SolverConfig) -> Result<f64, AnalysisError> {
    let m = dataset.num_inputs();
    let s = dataset.num_outputs();
    let target = dataset.dmu(o);
    let mut lp = LinearProgram::new(Sense::Maximize);
    let v: Vec<VarId> = (0..m)
        .map(|_| lp.add_var(0.0, f64::INFINITY, 0.0))
        .collect::<Result<_, _>>()?;
    let u: Vec<VarId> = (0..s)
        .map(|r| lp.add_var(0.0, f64::INFINITY, target.outputs[r]))
        .collect::<Result<_, _>>()?;
    let w0 = lp.add_var(f64::NEG_INFINITY, f64::INFINITY, -1.0)?;
    let norm: Vec<(VarId, f64)> = v.iter().zip(&target.inputs).map(|(&a, &x)| (a, x)).collect();
    lp.add_row(&norm, Relation::Eq, 1.0)?;
    for d in dataset.dmus() {
        let mut terms: Vec<(VarId, f64)> = u.iter().zip(&d.outputs).map(|(&a, &y)| (a, y)).collect();
        terms.extend(v.iter().zip(&d.inputs).map(|(&a, &x)| (a, -x)));
        terms.push((w0, -1.0));
        lp.add_row(&terms, Relation::Le, 0.0)?;
    }
    let sol = solve_lp(&lp, cfg);
    if sol.status != SolveStatus::Optimal {
        return Err(AnalysisError::from_status(&target.name, "multiplier form", None, sol.status));
    }
    Ok(sol.objective_value)
}
