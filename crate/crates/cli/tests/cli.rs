use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const TABLE_4_1: &str = "dmu,in:x,out:y
DMU1,1,2
DMU2,2,5
DMU3,3,6
DMU4,5,8
DMU5,8,8
DMU6,2,1
DMU7,3,3
DMU8,6,4
";

const TABLE_3_1_1: &str = "dmu,in:x,out:y
A,2,2
B,3,5
C,6,6
D,4,4
";

const TWO_BY_TWO: &str = "dmu,in:labour,in:capital,out:goods,out:services
p,4,3,2,5
q,7,3,4,4
r,8,1,6,3
s,4,2,3,1
t,2,4,1,4
u,10,6,5,5
";

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn dea(args: &[&str]) -> Run {
    let Output { status, stdout, stderr } = Command::new(env!("CARGO_BIN_EXE_dea-closest"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: status.code().expect("exit code"),
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

fn fixture(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(run: &Run) -> Value {
    assert_eq!(run.code, 0, "stderr: {}", run.stderr);
    serde_json::from_str(&run.stdout).expect("stdout is JSON")
}

fn error(run: &Run) -> Value {
    assert!(run.stdout.is_empty());
    let v: Value = serde_json::from_str(run.stderr.trim()).expect("stderr is JSON");
    v["error"].clone()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

fn unit<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["units"]
        .as_array()
        .unwrap()
        .iter()
        .find(|u| u["dmu"] == name)
        .unwrap()
}

#[test]
fn report_on_table_4_1_gives_targets_reference_sets_and_labels() {
    let dir = TempDir::new().unwrap();
    let input = fixture(&dir, "t.csv", TABLE_4_1);
    let report = json(&dea(&["report", "--input", s(&input)]));

    assert_eq!(report["efficient_units"], serde_json::json!(["DMU1", "DMU2", "DMU3", "DMU4"]));
    let expected = [
        ("DMU5", (5.0, 8.0), vec![("DMU4", 1.0)], "DRS"),
        ("DMU6", (1.0, 2.0), vec![("DMU1", 1.0)], "IRS"),
        ("DMU7", (4.0 / 3.0, 3.0), vec![("DMU1", 2.0 / 3.0), ("DMU2", 1.0 / 3.0)], "IRS"),
        ("DMU8", (5.0 / 3.0, 4.0), vec![("DMU1", 1.0 / 3.0), ("DMU2", 2.0 / 3.0)], "IRS"),
    ];
    for (name, (x, y), members, label) in expected {
        let u = unit(&report, name);
        assert_eq!(u["efficiency"]["efficient"], false);
        let target = &u["projection"]["target"];
        assert!((num(&target["inputs"]["x"]) - x).abs() <= 1e-6, "{name}");
        assert!((num(&target["outputs"]["y"]) - y).abs() <= 1e-6, "{name}");
        let got = u["reference_set"]["members"].as_array().unwrap();
        assert_eq!(got.len(), members.len(), "{name}");
        for (m, (dmu, w)) in got.iter().zip(members) {
            assert_eq!(m["dmu"], dmu);
            assert!((num(&m["weight"]) - w).abs() <= 1e-4, "{name} weight on {dmu}");
        }
        assert_eq!(u["rts"]["label"], label, "{name}");
    }
    for u in report["units"].as_array().unwrap() {
        assert!(u["rts"]["label"].is_string());
        assert!(u["projection"].is_object() && u["reference_set"].is_object());
    }
}

#[test]
fn efficiency_on_table_3_1_1_flags_only_d() {
    let dir = TempDir::new().unwrap();
    let input = fixture(&dir, "t.csv", TABLE_3_1_1);
    let report = json(&dea(&["efficiency", "--input", s(&input)]));
    assert_eq!(report["efficient_units"], serde_json::json!(["A", "B", "C"]));
    let d = unit(&report, "D");
    assert_eq!(d["efficiency"]["efficient"], false);
    assert!(num(&d["efficiency"]["theta"]) < 1.0);
    assert!(d.get("projection").is_none() && d.get("rts").is_none());
}

#[test]
fn subcommands_add_sections_cumulatively() {
    let dir = TempDir::new().unwrap();
    let input = fixture(&dir, "t.csv", TABLE_4_1);
    let sections = |cmd: &str| {
        let report = json(&dea(&[cmd, "--input", s(&input)]));
        let u = unit(&report, "DMU7").clone();
        ["projection", "reference_set", "rts"].map(|k| u.get(k).is_some())
    };
    assert_eq!(sections("efficiency"), [false, false, false]);
    assert_eq!(sections("project"), [true, false, false]);
    assert_eq!(sections("mcrs"), [true, true, false]);
    assert_eq!(sections("rts"), [true, false, true]);
    assert_eq!(sections("report"), [true, true, true]);
}

#[test]
fn units_follow_dataset_order() {
    let dir = TempDir::new().unwrap();
    let shuffled = "dmu,in:x,out:y\nDMU8,6,4\nDMU1,1,2\nDMU5,8,8\nDMU2,2,5\n";
    let input = fixture(&dir, "t.csv", shuffled);
    let report = json(&dea(&["project", "--input", s(&input)]));
    let names: Vec<_> = report["units"].as_array().unwrap().iter().map(|u| u["dmu"].clone()).collect();
    assert_eq!(names, ["DMU8", "DMU1", "DMU5", "DMU2"]);
}

#[test]
fn empty_file_is_a_validation_error() {
    let dir = TempDir::new().unwrap();
    let input = fixture(&dir, "empty.csv", "");
    let run = dea(&["efficiency", "--input", s(&input)]);
    assert_eq!(run.code, 2);
    assert_eq!(error(&run)["kind"], "validation");
}

#[test]
fn bad_cell_reports_its_coordinates() {
    let dir = TempDir::new().unwrap();
    let input = fixture(&dir, "bad.csv", "dmu,in:x,out:y\na,1,2\nb,oops,3\n");
    let run = dea(&["efficiency", "--input", s(&input)]);
    assert_eq!(run.code, 2);
    let e = error(&run);
    assert!(e["row"].is_u64() && e["column"].is_u64(), "{e}");
}

#[test]
fn missing_file_is_an_io_error() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("absent.csv");
    let run = dea(&["report", "--input", s(&missing)]);
    assert_eq!(run.code, 4);
    assert_eq!(error(&run)["kind"], "io");
}

#[test]
fn invalid_priority_and_settings_are_validation_errors() {
    let dir = TempDir::new().unwrap();
    let input = fixture(&dir, "t.csv", TABLE_4_1);
    for extra in [
        &["--priority", "out:y"][..],
        &["--priority", "out:y,out:y"],
        &["--priority", "in:z,out:y"],
        &["--tol", "-1"],
        &["--big-m", "0"],
        &["--format", "xml"],
    ] {
        let mut args = vec!["project", "--input", s(&input)];
        args.extend_from_slice(extra);
        let run = dea(&args);
        assert_eq!(run.code, 2, "{extra:?}: {}", run.stderr);
        assert_eq!(error(&run)["kind"], "validation", "{extra:?}");
    }
    let run = dea(&["project"]);
    assert_eq!(run.code, 2);
    assert_eq!(error(&run)["kind"], "validation");
}

#[test]
fn explicit_priority_changes_the_target() {
    let dir = TempDir::new().unwrap();
    let input = fixture(&dir, "t.csv", TABLE_4_1);
    let report = json(&dea(&["project", "--input", s(&input), "--priority", "in:x,out:y"]));
    assert_eq!(report["config"]["priority"], serde_json::json!(["in:x", "out:y"]));
    let stages = &unit(&report, "DMU5")["projection"]["stages"];
    assert_eq!(stages[0]["slack"], "in:x");
}

#[test]
fn overrides_are_echoed() {
    let dir = TempDir::new().unwrap();
    let input = fixture(&dir, "t.csv", TABLE_4_1);
    let report = json(&dea(&["efficiency", "--input", s(&input), "--big-m", "2e6", "--tol", "1e-8"]));
    assert_eq!(num(&report["config"]["big_m"]), 2e6);
    assert_eq!(num(&report["config"]["zero_tol"]), 1e-8);
}

fn without_timing(stdout: &str) -> Value {
    let mut v: Value = serde_json::from_str(stdout).unwrap();
    v.as_object_mut().unwrap().remove("timing");
    v
}

#[test]
fn repeated_runs_agree_apart_from_timing() {
    let dir = TempDir::new().unwrap();
    let input = fixture(&dir, "t.csv", TWO_BY_TWO);
    let first = dea(&["report", "--input", s(&input)]);
    let second = dea(&["report", "--input", s(&input)]);
    assert_eq!(first.code, 0, "{}", first.stderr);
    assert_eq!(without_timing(&first.stdout), without_timing(&second.stdout));
    // Timing is a single top-level field; every other byte matches.
    let strip = |s: &str| s.split("\"timing\"").next().unwrap().to_string();
    assert_eq!(strip(&first.stdout), strip(&second.stdout));

    let csv1 = dea(&["report", "--input", s(&input), "--format", "csv"]);
    let csv2 = dea(&["report", "--input", s(&input), "--format", "csv"]);
    assert_eq!(csv1.stdout, csv2.stdout);
}

#[test]
fn csv_and_json_carry_the_same_numbers() {
    let dir = TempDir::new().unwrap();
    for (name, body) in [("a.csv", TABLE_4_1), ("b.csv", TWO_BY_TWO)] {
        let input = fixture(&dir, name, body);
        let report = json(&dea(&["report", "--input", s(&input)]));
        let run = dea(&["report", "--input", s(&input), "--format", "csv"]);
        assert_eq!(run.code, 0);
        let mut rows = csv::Reader::from_reader(run.stdout.as_bytes());
        let header: Vec<String> = rows.headers().unwrap().iter().map(String::from).collect();
        let col = |h: &str| header.iter().position(|x| x == h).unwrap();
        let same = |text: &str, v: &Value| match v {
            Value::String(s) => assert_eq!(text, s),
            Value::Null => assert_eq!(text, ""),
            v => assert_eq!(text.parse::<f64>().unwrap().to_bits(), num(v).to_bits(), "{text} vs {v}"),
        };
        for (row, u) in rows.records().zip(report["units"].as_array().unwrap()) {
            let row = row.unwrap();
            assert_eq!(&row[col("dmu")], u["dmu"].as_str().unwrap());
            same(&row[col("theta")], &u["efficiency"]["theta"]);
            assert_eq!(row[col("efficient")], u["efficiency"]["efficient"].to_string());
            let p = &u["projection"];
            for (k, v) in p["target"]["inputs"].as_object().unwrap() {
                same(&row[col(&format!("target:in:{k}"))], v);
            }
            for (k, v) in p["target"]["outputs"].as_object().unwrap() {
                same(&row[col(&format!("target:out:{k}"))], v);
            }
            for (k, v) in p["slacks"].as_object().unwrap() {
                same(&row[col(&format!("slack:{k}"))], v);
            }
            let members = u["reference_set"]["members"].as_array().unwrap();
            let names: Vec<_> = members.iter().map(|m| m["dmu"].as_str().unwrap()).collect();
            assert_eq!(row[col("mcrs")], names.join(";"));
            for (text, m) in row[col("mcrs_weights")].split(';').zip(members) {
                same(text, &m["weight"]);
            }
            assert_eq!(&row[col("rts")], u["rts"]["label"].as_str().unwrap());
            same(&row[col("w0_upper")], &u["rts"]["w0_upper"]);
            same(&row[col("w0_lower")], &u["rts"]["w0_lower"]);
        }
    }
}

#[test]
fn numbers_carry_at_most_nine_significant_digits() {
    let dir = TempDir::new().unwrap();
    let input = fixture(&dir, "t.csv", TABLE_4_1);
    let report = json(&dea(&["report", "--input", s(&input)]));
    let theta = num(&unit(&report, "DMU8")["efficiency"]["theta"]);
    assert_eq!(theta, 0.277777778);
    let x = num(&unit(&report, "DMU8")["projection"]["target"]["inputs"]["x"]);
    assert_eq!(x, 1.66666667);
}

#[test]
fn every_command_validates_against_the_schema() {
    let schema: Value = serde_json::from_str(include_str!("../schema/report.schema.json")).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let dir = TempDir::new().unwrap();
    for (name, body) in [("a.csv", TABLE_4_1), ("b.csv", TABLE_3_1_1), ("c.csv", TWO_BY_TWO)] {
        let input = fixture(&dir, name, body);
        for cmd in ["efficiency", "project", "mcrs", "rts", "report"] {
            let report = json(&dea(&[cmd, "--input", s(&input)]));
            let errors: Vec<String> = validator.iter_errors(&report).map(|e| e.to_string()).collect();
            assert!(errors.is_empty(), "{cmd} on {name}: {errors:?}");
        }
    }
    let broken = serde_json::json!({ "schema_version": "1.0.0" });
    assert!(!validator.is_valid(&broken));
}

fn plot_rows(path: &Path) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    assert_eq!(
        r.headers().unwrap().iter().collect::<Vec<_>>(),
        ["kind", "dmu", "x", "y", "target_x", "target_y"]
    );
    r.records()
        .map(|row| row.unwrap().iter().map(String::from).collect())
        .collect()
}

fn of_kind<'a>(rows: &'a [Vec<String>], kind: &str) -> Vec<&'a [String]> {
    rows.iter().filter(|r| r[0] == kind).map(|r| &r[1..]).collect()
}

#[test]
fn plot_data_traces_the_table_4_1_frontier() {
    let dir = TempDir::new().unwrap();
    let input = fixture(&dir, "t.csv", TABLE_4_1);
    let plot = dir.path().join("plot.csv");
    let run = dea(&["report", "--input", s(&input), "--plot-data", s(&plot)]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let rows = plot_rows(&plot);
    let frontier: Vec<_> = of_kind(&rows, "frontier")
        .iter()
        .map(|r| (r[1].parse::<f64>().unwrap(), r[2].parse::<f64>().unwrap()))
        .collect();
    assert_eq!(frontier, [(1.0, 2.0), (2.0, 5.0), (3.0, 6.0), (5.0, 8.0)]);
    assert_eq!(of_kind(&rows, "point").len(), 8);
    assert_eq!(of_kind(&rows, "arrow").len(), 4);
}

#[test]
fn plot_data_draws_the_arrow_from_d() {
    let dir = TempDir::new().unwrap();
    let input = fixture(&dir, "t.csv", TABLE_3_1_1);
    let plot = dir.path().join("plot.csv");
    // The efficiency report has no targets; the plot still gets its arrows.
    let run = dea(&["efficiency", "--input", s(&input), "--plot-data", s(&plot)]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let rows = plot_rows(&plot);
    let names: Vec<_> = of_kind(&rows, "frontier").iter().map(|r| r[0].clone()).collect();
    assert_eq!(names, ["A", "B", "C"]);
    let arrows = of_kind(&rows, "arrow");
    assert_eq!(arrows.len(), 1);
    let a = arrows[0];
    assert_eq!(a[0], "D");
    assert_eq!((a[1].as_str(), a[2].as_str()), ("4", "4"));
    assert!((a[3].parse::<f64>().unwrap() - 8.0 / 3.0).abs() <= 1e-6);
    assert!((a[4].parse::<f64>().unwrap() - 4.0).abs() <= 1e-6);
}

#[test]
fn single_unit_has_a_one_point_frontier() {
    let dir = TempDir::new().unwrap();
    let input = fixture(&dir, "t.csv", "dmu,in:x,out:y\nonly,3,7\n");
    let plot = dir.path().join("plot.csv");
    let run = dea(&["report", "--input", s(&input), "--plot-data", s(&plot)]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let rows = plot_rows(&plot);
    assert_eq!(of_kind(&rows, "frontier"), [&["only", "3", "7", "", ""].map(String::from)[..]]);
    assert!(of_kind(&rows, "arrow").is_empty());
}

#[test]
fn plot_data_needs_one_input_and_one_output() {
    let dir = TempDir::new().unwrap();
    let input = fixture(&dir, "t.csv", TWO_BY_TWO);
    let plot = dir.path().join("plot.csv");
    let run = dea(&["report", "--input", s(&input), "--plot-data", s(&plot)]);
    assert_eq!(run.code, 2);
    assert_eq!(error(&run)["kind"], "validation");
    assert!(!plot.exists());
}

#[test]
fn unwritable_plot_path_is_an_io_error() {
    let dir = TempDir::new().unwrap();
    let input = fixture(&dir, "t.csv", TABLE_4_1);
    let plot = dir.path().join("no/such/dir/plot.csv");
    let run = dea(&["efficiency", "--input", s(&input), "--plot-data", s(&plot)]);
    assert_eq!(run.code, 4);
}
