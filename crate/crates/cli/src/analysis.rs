use dea_core::efficiency::{efficient_set_from, evaluate_all};
use dea_core::{
    identify_mcrs, rts::crts_at, AnalysisError, Dataset, EfficiencyResult, EfficientSet,
    McrsResult, PriorityRanking, Projection, RtsBounds, RtsLabel, SolverConfig,
};

use crate::cli::Sections;

pub struct UnitAnalysis {
    pub efficiency: EfficiencyResult,
    pub projection: Option<Projection>,
    pub reference_set: Option<McrsResult>,
    pub rts: Option<(RtsBounds, RtsLabel)>,
}

impl UnitAnalysis {
    /// Projection and reference-set warnings, first occurrence kept.
    pub fn warnings(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        let from_projection = self.projection.iter().flat_map(|p| &p.warnings);
        let from_mcrs = self.reference_set.iter().flat_map(|r| &r.warnings);
        for w in from_projection.chain(from_mcrs) {
            if !out.contains(w) {
                out.push(w.clone());
            }
        }
        out
    }
}

pub struct Analysis {
    pub efficient: EfficientSet,
    pub units: Vec<UnitAnalysis>,
}

/// Runs every unit through the stages `sections` asks for, in dataset order.
pub fn run(
    dataset: &Dataset,
    priority: &PriorityRanking,
    cfg: &SolverConfig,
    sections: Sections,
) -> Result<Analysis, AnalysisError> {
    let scores = evaluate_all(dataset, cfg)?;
    let efficient = efficient_set_from(&scores);
    let mut units = Vec::with_capacity(scores.len());
    for efficiency in scores {
        let o = efficiency.dmu;
        let mut unit = UnitAnalysis {
            efficiency,
            projection: None,
            reference_set: None,
            rts: None,
        };
        if sections.projection {
            let mut projection = dea_core::closest_projection(dataset, &efficient, o, priority, cfg)?;
            if sections.reference_set {
                unit.reference_set = Some(identify_mcrs(dataset, &efficient, &projection, cfg)?);
            }
            if sections.rts {
                let labelled = crts_at(dataset, projection, cfg)?;
                unit.rts = Some((labelled.bounds, labelled.label));
                projection = labelled.projection;
            }
            unit.projection = Some(projection);
        }
        units.push(unit);
    }
    Ok(Analysis { efficient, units })
}
