use thiserror::Error;

use crate::data::DataError;
use crate::solver::{SolveStatus, SolverError};

/// Failure of an analysis step on a particular unit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    /// The solver stopped on an iteration or node limit.
    #[error("{model} for DMU {dmu:?}{}: solver stopped with {status:?}", stage_suffix(.stage))]
    Limit {
        dmu: String,
        model: &'static str,
        stage: Option<usize>,
        status: SolveStatus,
    },
    /// A model that is feasible and bounded by construction was reported otherwise.
    #[error("{model} for DMU {dmu:?}{}: {message}", stage_suffix(.stage))]
    Internal {
        dmu: String,
        model: &'static str,
        stage: Option<usize>,
        message: String,
    },
    /// The caller supplied a point that does not lie on the efficient frontier.
    #[error("point for DMU {dmu:?} is not on the efficient frontier: {message}")]
    NotOnFrontier { dmu: String, message: String },
}

fn stage_suffix(stage: &Option<usize>) -> String {
    stage.map(|k| format!(" (stage {k})")).unwrap_or_default()
}

impl AnalysisError {
    pub(crate) fn from_status(
        dmu: &str,
        model: &'static str,
        stage: Option<usize>,
        status: SolveStatus,
    ) -> Self {
        match status {
            SolveStatus::IterationLimit | SolveStatus::NodeLimit => AnalysisError::Limit {
                dmu: dmu.to_string(),
                model,
                stage,
                status,
            },
            other => AnalysisError::Internal {
                dmu: dmu.to_string(),
                model,
                stage,
                message: format!("unexpected solver status {other:?}"),
            },
        }
    }
}
