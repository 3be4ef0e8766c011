use std::io::Write;

use dea_core::{Dataset, PriorityRanking, SlackLabel, SolverConfig};
use serde::Serialize;

use crate::analysis::{Analysis, UnitAnalysis};
use crate::cli::Sections;
use crate::render::{cell, Labelled, Num};

pub const SCHEMA_VERSION: &str = "1.0.0";

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub tool: Tool,
    pub command: &'static str,
    pub input: InputInfo,
    pub config: ConfigEcho,
    pub efficient_units: Vec<String>,
    pub units: Vec<UnitRecord>,
    /// The only field that varies between identical runs.
    pub timing: Timing,
}

#[derive(Debug, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Serialize)]
pub struct InputInfo {
    pub file: String,
    pub units: usize,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct ConfigEcho {
    pub priority: Vec<String>,
    pub big_m: Num,
    pub zero_tol: Num,
    pub feas_tol: Num,
    pub pivot_tol: Num,
    pub int_tol: Num,
    pub lex_pin_tol: Num,
    pub max_iterations: usize,
    pub max_nodes: usize,
    pub degenerate_pivot_limit: usize,
}

#[derive(Debug, Serialize)]
pub struct Timing {
    pub elapsed_ms: Num,
}

#[derive(Debug, Serialize)]
pub struct UnitRecord {
    pub dmu: String,
    pub efficiency: EfficiencyRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub projection: Option<ProjectionRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_set: Option<ReferenceRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rts: Option<RtsRecord>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct EfficiencyRecord {
    pub theta: Num,
    pub efficient: bool,
}

#[derive(Debug, Serialize)]
pub struct ProjectionRecord {
    pub target: TargetRecord,
    pub slacks: Labelled,
    pub stages: Vec<StageRecord>,
    pub ucrs: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct TargetRecord {
    pub inputs: Labelled,
    pub outputs: Labelled,
}

#[derive(Debug, Serialize)]
pub struct StageRecord {
    pub stage: usize,
    pub slack: String,
    pub value: Num,
    pub nodes: usize,
}

#[derive(Debug, Serialize)]
pub struct ReferenceRecord {
    pub members: Vec<MemberRecord>,
}

#[derive(Debug, Serialize)]
pub struct MemberRecord {
    pub dmu: String,
    pub weight: Num,
}

#[derive(Debug, Serialize)]
pub struct RtsRecord {
    pub label: &'static str,
    pub w0_upper: Num,
    pub w0_lower: Option<Num>,
    pub stage_count: u8,
}

pub struct Context<'a> {
    pub command: &'static str,
    pub file: String,
    pub dataset: &'a Dataset,
    pub priority: &'a PriorityRanking,
    pub cfg: &'a SolverConfig,
    pub sections: Sections,
}

pub fn build(ctx: &Context<'_>, analysis: &Analysis, elapsed_ms: f64) -> Report {
    let ds = ctx.dataset;
    let cfg = ctx.cfg;
    Report {
        schema_version: SCHEMA_VERSION,
        tool: Tool {
            name: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
        },
        command: ctx.command,
        input: InputInfo {
            file: ctx.file.clone(),
            units: ds.len(),
            inputs: ds.input_names().to_vec(),
            outputs: ds.output_names().to_vec(),
        },
        config: ConfigEcho {
            priority: ctx.priority.order().iter().map(|&l| ds.slack_label_name(l)).collect(),
            big_m: Num(cfg.big_m),
            zero_tol: Num(cfg.zero_tol),
            feas_tol: Num(cfg.feas_tol),
            pivot_tol: Num(cfg.pivot_tol),
            int_tol: Num(cfg.int_tol),
            lex_pin_tol: Num(cfg.lex_pin_tol),
            max_iterations: cfg.max_iterations,
            max_nodes: cfg.max_nodes,
            degenerate_pivot_limit: cfg.degenerate_pivot_limit,
        },
        efficient_units: analysis
            .efficient
            .members()
            .iter()
            .map(|&j| ds.dmu(j).name.clone())
            .collect(),
        units: analysis
            .units
            .iter()
            .map(|u| unit_record(ctx, analysis, u))
            .collect(),
        timing: Timing {
            elapsed_ms: Num(elapsed_ms),
        },
    }
}

fn unit_record(ctx: &Context<'_>, analysis: &Analysis, unit: &UnitAnalysis) -> UnitRecord {
    let ds = ctx.dataset;
    let name = |j: usize| ds.dmu(j).name.clone();
    let snap = |v: f64| if v.abs() <= ctx.cfg.zero_tol { 0.0 } else { v };
    let projection = unit.projection.as_ref().filter(|_| ctx.sections.projection).map(|p| {
        ProjectionRecord {
            target: TargetRecord {
                inputs: Labelled::new(ds.input_names().iter().cloned(), &p.target_inputs),
                outputs: Labelled::new(ds.output_names().iter().cloned(), &p.target_outputs),
            },
            slacks: Labelled::new(slack_names(ds), &p.slacks.iter().map(|&v| snap(v)).collect::<Vec<_>>()),
            stages: p
                .stages
                .iter()
                .map(|s| StageRecord {
                    stage: s.stage,
                    slack: ds.slack_label_name(s.label),
                    value: Num(snap(s.value)),
                    nodes: s.nodes,
                })
                .collect(),
            ucrs: p.ucrs.iter().map(|&j| name(j)).collect(),
        }
    });
    let reference_set = unit
        .reference_set
        .as_ref()
        .filter(|_| ctx.sections.reference_set)
        .map(|r| ReferenceRecord {
            members: r
                .mcrs
                .iter()
                .map(|&j| MemberRecord {
                    dmu: name(j),
                    weight: Num(analysis
                        .efficient
                        .position(j)
                        .map_or(0.0, |k| r.lambda_max[k])),
                })
                .collect(),
        });
    let rts = unit
        .rts
        .as_ref()
        .filter(|_| ctx.sections.rts)
        .map(|(bounds, label)| RtsRecord {
            label: label.abbreviation(),
            w0_upper: Num(bounds.w0_upper),
            w0_lower: bounds.w0_lower.map(Num),
            stage_count: bounds.stage_count,
        });
    UnitRecord {
        dmu: name(unit.efficiency.dmu),
        efficiency: EfficiencyRecord {
            theta: Num(unit.efficiency.theta),
            efficient: unit.efficiency.is_efficient,
        },
        projection,
        reference_set,
        rts,
        warnings: if ctx.sections.projection { unit.warnings() } else { Vec::new() },
    }
}

fn slack_names(ds: &Dataset) -> impl Iterator<Item = String> + '_ {
    ds.slack_labels().into_iter().map(|l: SlackLabel| ds.slack_label_name(l))
}

pub fn write_json<W: Write>(report: &Report, mut out: W) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut out, report)?;
    out.write_all(b"\n")
}

/// One row per unit with the same rounded numbers as the JSON report.
pub fn write_csv<W: Write>(report: &Report, sections: Sections, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["dmu".to_string(), "theta".into(), "efficient".into()];
    if sections.projection {
        let input = &report.input;
        header.extend(input.inputs.iter().map(|n| format!("target:in:{n}")));
        header.extend(input.outputs.iter().map(|n| format!("target:out:{n}")));
        header.extend(input.inputs.iter().map(|n| format!("slack:in:{n}")));
        header.extend(input.outputs.iter().map(|n| format!("slack:out:{n}")));
    }
    if sections.reference_set {
        header.extend(["mcrs".to_string(), "mcrs_weights".into()]);
    }
    if sections.rts {
        header.extend(["rts".to_string(), "w0_upper".into(), "w0_lower".into()]);
    }
    if sections.projection {
        header.push("warnings".into());
    }
    w.write_record(&header)?;

    let nums = |l: &Labelled| l.0.iter().map(|(_, v)| cell(v.0)).collect::<Vec<_>>();
    for u in &report.units {
        let mut row = vec![
            u.dmu.clone(),
            cell(u.efficiency.theta.0),
            u.efficiency.efficient.to_string(),
        ];
        if let Some(p) = &u.projection {
            row.extend(nums(&p.target.inputs));
            row.extend(nums(&p.target.outputs));
            row.extend(nums(&p.slacks));
        }
        if let Some(r) = &u.reference_set {
            row.push(r.members.iter().map(|m| m.dmu.as_str()).collect::<Vec<_>>().join(";"));
            row.push(r.members.iter().map(|m| cell(m.weight.0)).collect::<Vec<_>>().join(";"));
        }
        if let Some(r) = &u.rts {
            row.push(r.label.to_string());
            row.push(cell(r.w0_upper.0));
            row.push(r.w0_lower.map_or(String::new(), |v| cell(v.0)));
        }
        if sections.projection {
            row.push(u.warnings.join(";"));
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
