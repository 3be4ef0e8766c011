//! Unique closest efficient projection by lexicographic slack minimization.
//!
//! Each stage is a mixed-binary program over the efficient units `J_E`:
//!
//! ```text
//! sum_j lambda_j x_ij = x_io - s_i                         (inputs)
//! sum_j lambda_j y_rj = y_ro + s_{m+r}                     (outputs)
//! sum_j lambda_j = 1
//! sum_r w_{m+r} y_rj - sum_i w_i x_ij - w0 + d_j = 0       (j in J_E)
//! lambda_j + I_j <= 1,   d_j - M I_j <= 0,   I_j in {0,1}
//! w >= 1,  s >= 0,  d >= 0,  w0 free
//! ```
//!
//! The indicator pair forces every unit carrying weight onto a supporting
//! hyperplane with strictly positive weights, so the target lands on the
//! strongly efficient frontier. Stage `k` minimizes the `k`-th slack of the
//! priority ranking with the earlier optima pinned by bounds.

use crate::data::{Dataset, PriorityRanking, SlackLabel};
use crate::efficiency::EfficientSet;
use crate::error::AnalysisError;
use crate::solver::{solve_milp, LinearProgram, Relation, Sense, SolveStatus, SolverConfig, VarId};

/// Column handles of one stage program.
#[derive(Debug, Clone)]
pub struct StageVars {
    /// One per member of `J_E`, in set order.
    pub lambda: Vec<VarId>,
    /// Input excesses then output shortfalls.
    pub slack: Vec<VarId>,
    /// Input weights then output weights.
    pub weight: Vec<VarId>,
    pub intercept: VarId,
    pub deviation: Vec<VarId>,
    pub indicator: Vec<VarId>,
}

#[derive(Debug, Clone)]
pub struct StageModel {
    pub lp: LinearProgram,
    pub vars: StageVars,
}

/// Snapshot of one solved stage.
#[derive(Debug, Clone, PartialEq)]
pub struct StageSolution {
    /// 1-based stage number.
    pub stage: usize,
    pub label: SlackLabel,
    pub value: f64,
    /// Over `J_E`, in set order.
    pub lambda: Vec<f64>,
    pub slacks: Vec<f64>,
    pub weights: Vec<f64>,
    pub intercept: f64,
    pub deviations: Vec<f64>,
    pub indicators: Vec<f64>,
    pub nodes: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub dmu: usize,
    pub target_inputs: Vec<f64>,
    pub target_outputs: Vec<f64>,
    /// Input excesses then output shortfalls.
    pub slacks: Vec<f64>,
    /// Empty for efficient units, which project onto themselves.
    pub stages: Vec<StageSolution>,
    pub priority: PriorityRanking,
    /// Efficient units (dataset indices) with positive weight in the final stage.
    pub ucrs: Vec<usize>,
    pub warnings: Vec<String>,
}

/// Builds the stage program that minimizes `target` with `pinned` slacks
/// held at their earlier optima.
pub fn build_stage_milp(
    dataset: &Dataset,
    efficient: &EfficientSet,
    o: usize,
    pinned: &[(SlackLabel, f64)],
    target: SlackLabel,
    cfg: &SolverConfig,
) -> Result<StageModel, AnalysisError> {
    build_stage(dataset, efficient, o, pinned, target, 0.0, cfg)
}

/// Stage program with each pin window widened by `slack_room` times the
/// magnitude of the pinned slack's data row.
fn build_stage(
    dataset: &Dataset,
    efficient: &EfficientSet,
    o: usize,
    pinned: &[(SlackLabel, f64)],
    target: SlackLabel,
    slack_room: f64,
    cfg: &SolverConfig,
) -> Result<StageModel, AnalysisError> {
    let m = dataset.num_inputs();
    let s = dataset.num_outputs();
    let members = efficient.members();
    let dmu_o = dataset.dmu(o);

    let mut lp = LinearProgram::new(Sense::Minimize);
    let lambda: Vec<VarId> = members
        .iter()
        .map(|_| lp.add_var(0.0, 1.0, 0.0))
        .collect::<Result<_, _>>()?;
    let slack: Vec<VarId> = (0..m + s)
        .map(|_| lp.add_var(0.0, f64::INFINITY, 0.0))
        .collect::<Result<_, _>>()?;
    let weight: Vec<VarId> = (0..m + s)
        .map(|_| lp.add_var(1.0, f64::INFINITY, 0.0))
        .collect::<Result<_, _>>()?;
    let intercept = lp.add_var(f64::NEG_INFINITY, f64::INFINITY, 0.0)?;
    let deviation: Vec<VarId> = members
        .iter()
        .map(|_| lp.add_var(0.0, f64::INFINITY, 0.0))
        .collect::<Result<_, _>>()?;
    let indicator: Vec<VarId> = members.iter().map(|_| lp.add_binary(0.0)).collect();

    lp.set_cost(slack[target.position(m)], 1.0);
    for &(label, v) in pinned {
        let v = v.max(0.0);
        let room = slack_room * (1.0 + row_scale(dataset, efficient, o, label.position(m)));
        lp.set_bounds(
            slack[label.position(m)],
            (v - room).max(0.0),
            v + cfg.lex_pin_tol + room,
        )?;
    }

    for i in 0..m {
        let mut terms: Vec<(VarId, f64)> = members
            .iter()
            .zip(&lambda)
            .map(|(&j, &l)| (l, dataset.dmu(j).inputs[i]))
            .collect();
        terms.push((slack[i], 1.0));
        lp.add_row(&terms, Relation::Eq, dmu_o.inputs[i])?;
    }
    for r in 0..s {
        let mut terms: Vec<(VarId, f64)> = members
            .iter()
            .zip(&lambda)
            .map(|(&j, &l)| (l, dataset.dmu(j).outputs[r]))
            .collect();
        terms.push((slack[m + r], -1.0));
        lp.add_row(&terms, Relation::Eq, dmu_o.outputs[r])?;
    }
    let convexity: Vec<(VarId, f64)> = lambda.iter().map(|&l| (l, 1.0)).collect();
    lp.add_row(&convexity, Relation::Eq, 1.0)?;

    for (k, &j) in members.iter().enumerate() {
        let unit = dataset.dmu(j);
        let mut terms: Vec<(VarId, f64)> = Vec::with_capacity(m + s + 2);
        terms.extend(unit.outputs.iter().enumerate().map(|(r, &y)| (weight[m + r], y)));
        terms.extend(unit.inputs.iter().enumerate().map(|(i, &x)| (weight[i], -x)));
        terms.push((intercept, -1.0));
        terms.push((deviation[k], 1.0));
        lp.add_row(&terms, Relation::Eq, 0.0)?;
    }
    for k in 0..members.len() {
        // lambda_j <= M (1 - I_j), tightened to 1 - I_j by the convexity row.
        lp.add_row(&[(lambda[k], 1.0), (indicator[k], 1.0)], Relation::Le, 1.0)?;
        lp.add_row(
            &[(deviation[k], 1.0), (indicator[k], -cfg.big_m)],
            Relation::Le,
            0.0,
        )?;
    }

    Ok(StageModel {
        lp,
        vars: StageVars {
            lambda,
            slack,
            weight,
            intercept,
            deviation,
            indicator,
        },
    })
}

/// Lexicographically minimal slacks for unit `o` under `priority`.
pub fn closest_projection(
    dataset: &Dataset,
    efficient: &EfficientSet,
    o: usize,
    priority: &PriorityRanking,
    cfg: &SolverConfig,
) -> Result<Projection, AnalysisError> {
    let m = dataset.num_inputs();
    let s = dataset.num_outputs();
    let dmu = dataset.dmu(o);

    if efficient.contains(o) {
        return Ok(Projection {
            dmu: o,
            target_inputs: dmu.inputs.clone(),
            target_outputs: dmu.outputs.clone(),
            slacks: vec![0.0; m + s],
            stages: Vec::new(),
            priority: priority.clone(),
            ucrs: vec![o],
            warnings: Vec::new(),
        });
    }
    if efficient.is_empty() {
        return Err(AnalysisError::Internal {
            dmu: dmu.name.clone(),
            model: "closest projection",
            stage: None,
            message: "no efficient units".into(),
        });
    }

    let mut pinned: Vec<(SlackLabel, f64)> = Vec::with_capacity(m + s);
    let mut stages = Vec::with_capacity(m + s);
    let mut warnings = Vec::new();
    for (k, &label) in priority.order().iter().enumerate() {
        let stage = k + 1;
        let mut model = build_stage_milp(dataset, efficient, o, &pinned, label, cfg)?;
        let mut sol = solve_milp(&model.lp, cfg);
        // Earlier optima carry rounding of the order of the feasibility
        // tolerance times the data scale; an empty window is retried wider.
        let mut room = cfg.feas_tol;
        while sol.status == SolveStatus::Infeasible && !pinned.is_empty() && room <= 1e-6 {
            model = build_stage(dataset, efficient, o, &pinned, label, room, cfg)?;
            sol = solve_milp(&model.lp, cfg);
            room *= 10.0;
        }
        match sol.status {
            SolveStatus::Optimal => {}
            SolveStatus::Infeasible => {
                return Err(AnalysisError::Internal {
                    dmu: dmu.name.clone(),
                    model: "closest projection",
                    stage: Some(stage),
                    message: format!(
                        "stage program infeasible; big_m = {} may be too small",
                        cfg.big_m
                    ),
                });
            }
            status => {
                return Err(AnalysisError::from_status(
                    &dmu.name,
                    "closest projection",
                    Some(stage),
                    status,
                ))
            }
        }
        let v = &model.vars;
        let snapshot = StageSolution {
            stage,
            label,
            value: sol.value(v.slack[label.position(m)]).max(0.0),
            lambda: v.lambda.iter().map(|&x| sol.value(x)).collect(),
            slacks: v.slack.iter().map(|&x| sol.value(x)).collect(),
            weights: v.weight.iter().map(|&x| sol.value(x)).collect(),
            intercept: sol.value(v.intercept),
            deviations: v.deviation.iter().map(|&x| sol.value(x)).collect(),
            indicators: v.indicator.iter().map(|&x| sol.value(x)).collect(),
            nodes: sol.node_count,
        };
        let limit = cfg.big_m * (1.0 - 1e-3);
        for (pos, &d) in snapshot.deviations.iter().enumerate() {
            if d >= limit {
                warnings.push(format!(
                    "stage {stage}: deviation of {} is {d:.6e}, within 0.1% of big_m = {}",
                    dataset.dmu(efficient.members()[pos]).name,
                    cfg.big_m
                ));
            }
        }
        pinned.push((label, snapshot.value));
        stages.push(snapshot);
    }

    let last = stages.last().expect("at least one slack");
    // The target is the convex combination itself, so it sits exactly on the
    // face spanned by the units carrying weight. Solver noise in the weights
    // is cleaned first so they form an exact convex combination; units whose
    // indicator is set lie off the supporting hyperplane and carry no weight,
    // and weights at noise level are dropped so the target spans the UCRS.
    let clipped: Vec<f64> = last
        .lambda
        .iter()
        .zip(&last.indicators)
        .map(|(&l, &i)| if i > 0.5 || l <= cfg.zero_tol { 0.0 } else { l })
        .collect();
    let total: f64 = clipped.iter().sum();
    let weights: Vec<f64> = clipped.iter().map(|l| l / total).collect();
    let mut target_inputs = vec![0.0; m];
    let mut target_outputs = vec![0.0; s];
    for (&j, &l) in efficient.members().iter().zip(&weights) {
        let unit = dataset.dmu(j);
        for (acc, v) in target_inputs.iter_mut().zip(&unit.inputs) {
            *acc += l * v;
        }
        for (acc, v) in target_outputs.iter_mut().zip(&unit.outputs) {
            *acc += l * v;
        }
    }
    let slacks: Vec<f64> = (0..m)
        .map(|i| dmu.inputs[i] - target_inputs[i])
        .chain((0..s).map(|r| target_outputs[r] - dmu.outputs[r]))
        .collect();
    let ucrs = efficient
        .members()
        .iter()
        .zip(&weights)
        .filter(|(_, &l)| l > cfg.zero_tol)
        .map(|(&j, _)| j)
        .collect();

    Ok(Projection {
        dmu: o,
        target_inputs,
        target_outputs,
        slacks,
        stages,
        priority: priority.clone(),
        ucrs,
        warnings,
    })
}

fn row_scale(dataset: &Dataset, efficient: &EfficientSet, o: usize, pos: usize) -> f64 {
    let m = dataset.num_inputs();
    let coord = |j: usize| {
        let unit = dataset.dmu(j);
        if pos < m {
            unit.inputs[pos]
        } else {
            unit.outputs[pos - m]
        }
    };
    efficient
        .members()
        .iter()
        .chain(std::iter::once(&o))
        .map(|&j| coord(j).abs())
        .fold(0.0, f64::max)
}
