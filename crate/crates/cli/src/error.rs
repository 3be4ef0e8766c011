use std::path::PathBuf;
use std::process::ExitCode;

use dea_core::solver::SolverError;
use dea_core::{AnalysisError, DataError};
use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Data(#[from] DataError),
    #[error("invalid solver settings: {0}")]
    Config(SolverError),
    #[error("plot data needs one input and one output, found {inputs} and {outputs}")]
    PlotDimension { inputs: usize, outputs: usize },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Analysis(AnalysisError),
    #[error("cannot write report: {0}")]
    Render(String),
    #[error("{0}")]
    Usage(String),
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Data(d) => CliError::Data(d),
            other => CliError::Analysis(other),
        }
    }
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Data(_)
            | CliError::Config(_)
            | CliError::PlotDimension { .. }
            | CliError::Usage(_) => "validation",
            CliError::Io { .. } => "io",
            CliError::Analysis(AnalysisError::Limit { .. }) => "solver_limit",
            CliError::Analysis(_) | CliError::Render(_) => "internal",
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self.kind() {
            "validation" => 2,
            "solver_limit" => 3,
            "io" => 4,
            _ => 1,
        })
    }

    /// One-line JSON diagnostic for stderr.
    pub fn diagnostic(&self) -> serde_json::Value {
        let mut body = json!({ "kind": self.kind(), "message": self.to_string() });
        let extra = match self {
            CliError::Data(DataError::Cell { row, column, .. }) => json!({ "row": row, "column": column }),
            CliError::Data(DataError::Header { column, .. }) => json!({ "column": column }),
            CliError::Data(
                DataError::Ragged { row, .. }
                | DataError::DuplicateName { row, .. }
                | DataError::AllZero { row, .. }
                | DataError::Csv { row, .. },
            ) => json!({ "row": row }),
            CliError::Analysis(
                AnalysisError::Limit { dmu, model, stage, .. }
                | AnalysisError::Internal { dmu, model, stage, .. },
            ) => json!({ "dmu": dmu, "model": model, "stage": stage }),
            CliError::Analysis(AnalysisError::NotOnFrontier { dmu, .. }) => json!({ "dmu": dmu }),
            CliError::Io { path, .. } => json!({ "path": path.display().to_string() }),
            _ => json!({}),
        };
        if let (Some(b), Some(e)) = (body.as_object_mut(), extra.as_object()) {
            b.extend(e.clone());
        }
        json!({ "error": body })
    }
}
