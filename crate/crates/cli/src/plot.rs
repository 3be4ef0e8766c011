use std::io::Write;

use dea_core::Dataset;

use crate::analysis::Analysis;
use crate::render::cell;

/// Writes `kind,dmu,x,y,target_x,target_y` rows for a one-input,
/// one-output dataset: frontier vertices left to right, every observed
/// point, then an arrow from each inefficient unit to its target.
pub fn write<W: Write>(dataset: &Dataset, analysis: &Analysis, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["kind", "dmu", "x", "y", "target_x", "target_y"])?;
    let point = |j: usize| {
        let d = dataset.dmu(j);
        (d.inputs[0], d.outputs[0])
    };

    let mut frontier = analysis.efficient.members().to_vec();
    frontier.sort_by(|&a, &b| {
        let (pa, pb) = (point(a), point(b));
        pa.0.total_cmp(&pb.0).then(pa.1.total_cmp(&pb.1)).then(a.cmp(&b))
    });
    for j in frontier {
        let (x, y) = point(j);
        w.write_record([
            "frontier",
            &dataset.dmu(j).name,
            &cell(x),
            &cell(y),
            "",
            "",
        ])?;
    }
    for j in 0..dataset.len() {
        let (x, y) = point(j);
        w.write_record(["point", &dataset.dmu(j).name, &cell(x), &cell(y), "", ""])?;
    }
    for unit in &analysis.units {
        let (Some(p), false) = (&unit.projection, unit.efficiency.is_efficient) else {
            continue;
        };
        let j = unit.efficiency.dmu;
        let (x, y) = point(j);
        w.write_record([
            "arrow",
            &dataset.dmu(j).name,
            &cell(x),
            &cell(y),
            &cell(p.target_inputs[0]),
            &cell(p.target_outputs[0]),
        ])?;
    }
    w.flush()?;
    Ok(())
}
