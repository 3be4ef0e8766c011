//! Least-distance data envelopment analysis.
//!
//! For every inefficient unit the crate finds the unique closest efficient
//! target under a priority ranking of slacks, the maximal set of efficient
//! units that can reference that target, and the returns to scale that hold
//! there. All optimization runs on the embedded [`solver`].

pub mod data;
pub mod efficiency;
pub mod error;
pub mod projection;
pub mod reference_set;
pub mod rts;
pub mod solver;

pub use data::{default_priority, load_dataset, Dataset, DataError, Dmu, PriorityRanking, SlackLabel};
pub use efficiency::{efficient_set, evaluate_bcc, EfficiencyResult, EfficientSet};
pub use error::AnalysisError;
pub use projection::{closest_projection, Projection, StageSolution};
pub use reference_set::{identify_mcrs, McrsResult};
pub use rts::{classify, crts, w0_bounds, w0_bounds_on_face, CrtsResult, RtsBounds, RtsLabel};
pub use solver::{SolveStatus, SolverConfig};
