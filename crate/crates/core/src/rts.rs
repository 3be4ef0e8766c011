//! Returns to scale from the range of supporting-hyperplane intercepts.
//!
//! At a frontier point `(x^, y^)` the intercept `w0` of every supporting
//! hyperplane `u.y - v.x - w0 = 0` normalized by `v.x^ = 1` lies in
//! `[w0_lower, w0_upper]`. A negative upper end means increasing returns, a
//! positive lower end decreasing returns, and a range containing zero
//! constant returns.

use std::fmt;

use crate::data::{Dataset, PriorityRanking};
use crate::efficiency::EfficientSet;
use crate::error::AnalysisError;
use crate::projection::{closest_projection, Projection};
use crate::solver::{solve_lp, LinearProgram, Relation, Sense, SolveStatus, SolverConfig, VarId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RtsLabel {
    Increasing,
    Constant,
    Decreasing,
}

impl RtsLabel {
    pub fn abbreviation(self) -> &'static str {
        match self {
            RtsLabel::Increasing => "IRS",
            RtsLabel::Constant => "CRS",
            RtsLabel::Decreasing => "DRS",
        }
    }
}

impl fmt::Display for RtsLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.abbreviation())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RtsBounds {
    /// `+inf` when the maximization is unbounded.
    pub w0_upper: f64,
    /// `-inf` when the minimization is unbounded; `None` when it was skipped
    /// because the upper end already forces increasing returns.
    pub w0_lower: Option<f64>,
    pub stage_count: u8,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrtsResult {
    pub dmu: usize,
    pub projection: Projection,
    pub bounds: RtsBounds,
    pub label: RtsLabel,
}

/// Intercept bounds at a frontier point. Inequality rows range over every
/// unit of `dataset`; the normalization and equality rows use the point.
pub fn w0_bounds(
    dataset: &Dataset,
    x: &[f64],
    y: &[f64],
    label: &str,
    cfg: &SolverConfig,
) -> Result<RtsBounds, AnalysisError> {
    intercept_range(dataset, x, Contact::Point(x, y), label, cfg)
}

/// Intercept bounds at a point known to be a convex combination, with
/// positive weights, of the units in `support`. A supporting hyperplane
/// passes through such a point exactly when it passes through every unit of
/// the support, so the equality is imposed unit by unit. This avoids the
/// near dependency between the point row and the rows of its support.
pub fn w0_bounds_on_face(
    dataset: &Dataset,
    x: &[f64],
    support: &[usize],
    label: &str,
    cfg: &SolverConfig,
) -> Result<RtsBounds, AnalysisError> {
    intercept_range(dataset, x, Contact::Units(support), label, cfg)
}

enum Contact<'a> {
    Point(&'a [f64], &'a [f64]),
    Units(&'a [usize]),
}

fn intercept_range(
    dataset: &Dataset,
    x: &[f64],
    contact: Contact<'_>,
    label: &str,
    cfg: &SolverConfig,
) -> Result<RtsBounds, AnalysisError> {
    let mut lp = LinearProgram::new(Sense::Maximize);
    let v: Vec<VarId> = (0..dataset.num_inputs())
        .map(|_| lp.add_var(0.0, f64::INFINITY, 0.0))
        .collect::<Result<_, _>>()?;
    let u: Vec<VarId> = (0..dataset.num_outputs())
        .map(|_| lp.add_var(0.0, f64::INFINITY, 0.0))
        .collect::<Result<_, _>>()?;
    let w0 = lp.add_var(f64::NEG_INFINITY, f64::INFINITY, 1.0)?;

    let hyperplane = |xs: &[f64], ys: &[f64]| -> Vec<(VarId, f64)> {
        let mut terms: Vec<(VarId, f64)> = u.iter().zip(ys).map(|(&a, &b)| (a, b)).collect();
        terms.extend(v.iter().zip(xs).map(|(&a, &b)| (a, -b)));
        terms.push((w0, -1.0));
        terms
    };
    let norm: Vec<(VarId, f64)> = v.iter().zip(x).map(|(&a, &b)| (a, b)).collect();
    lp.add_row(&norm, Relation::Eq, 1.0)?;
    let on_plane = |j: usize| matches!(contact, Contact::Units(units) if units.contains(&j));
    for (j, d) in dataset.dmus().iter().enumerate() {
        let relation = if on_plane(j) { Relation::Eq } else { Relation::Le };
        lp.add_row(&hyperplane(&d.inputs, &d.outputs), relation, 0.0)?;
    }
    if let Contact::Point(x, y) = contact {
        lp.add_row(&hyperplane(x, y), Relation::Eq, 0.0)?;
    }

    let upper = extreme_w0(&lp, label, cfg)?;
    if upper < -cfg.zero_tol {
        return Ok(RtsBounds {
            w0_upper: upper,
            w0_lower: None,
            stage_count: 1,
        });
    }
    let mut lp_min = lp;
    lp_min.set_cost(w0, -1.0);
    let lower = -extreme_w0(&lp_min, label, cfg)?;
    Ok(RtsBounds {
        w0_upper: upper,
        w0_lower: Some(lower),
        stage_count: 2,
    })
}

fn extreme_w0(lp: &LinearProgram, label: &str, cfg: &SolverConfig) -> Result<f64, AnalysisError> {
    let sol = solve_lp(lp, cfg);
    match sol.status {
        SolveStatus::Optimal => Ok(sol.objective_value),
        SolveStatus::Unbounded => Ok(f64::INFINITY),
        SolveStatus::Infeasible => Err(AnalysisError::NotOnFrontier {
            dmu: label.to_string(),
            message: "no supporting hyperplane passes through the point".into(),
        }),
        status => Err(AnalysisError::from_status(label, "intercept bounds", None, status)),
    }
}

/// Sign tests on the intercept range.
pub fn classify(bounds: &RtsBounds, cfg: &SolverConfig) -> RtsLabel {
    if bounds.w0_upper < -cfg.zero_tol {
        RtsLabel::Increasing
    } else if bounds.w0_lower.is_some_and(|l| l > cfg.zero_tol) {
        RtsLabel::Decreasing
    } else {
        RtsLabel::Constant
    }
}

/// Returns to scale at the closest projection of unit `o`; for an efficient
/// unit this is its ordinary returns to scale.
pub fn crts(
    dataset: &Dataset,
    efficient: &EfficientSet,
    o: usize,
    priority: &PriorityRanking,
    cfg: &SolverConfig,
) -> Result<CrtsResult, AnalysisError> {
    let projection = closest_projection(dataset, efficient, o, priority, cfg)?;
    crts_at(dataset, projection, cfg)
}

/// Classifies an already computed projection.
pub fn crts_at(
    dataset: &Dataset,
    projection: Projection,
    cfg: &SolverConfig,
) -> Result<CrtsResult, AnalysisError> {
    let name = &dataset.dmu(projection.dmu).name;
    let bounds = w0_bounds_on_face(
        dataset,
        &projection.target_inputs,
        &projection.ucrs,
        name,
        cfg,
    )?;
    let label = classify(&bounds, cfg);
    Ok(CrtsResult {
        dmu: projection.dmu,
        projection,
        bounds,
        label,
    })
}
