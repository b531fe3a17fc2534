use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn stressflex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stressflex")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = stressflex(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

#[test]
fn analyze_cube_reports_one_stress_two_flexes() {
    let r = json(&["analyze", "--model", "cube", "--apex", "centroid"]);
    assert_eq!(r["dimensions"]["stress_dim"], 1);
    assert_eq!(r["dimensions"]["nontrivial_flex_dim"], 2);
    assert_eq!(r["izmestiev"]["status"], "certified");
    assert_eq!(r["stress_flex"]["verdict"], "holds");
    assert_eq!(r["stability"]["kind"], "prestress_stable");
    assert!(r.get("wall_clock_seconds").is_none());
}

#[test]
fn analyze_cuboctahedron_has_four_stresses() {
    let r = json(&["analyze", "--model", "cuboctahedron"]);
    assert_eq!(r["dimensions"]["stress_dim"], 4);
    assert_eq!(r["stress_flex"]["verdict"], "holds");
}

#[test]
fn timing_flag_adds_wall_clock() {
    let r = json(&["analyze", "--model", "tetrahedron", "--timing"]);
    assert!(f(&r["wall_clock_seconds"]) >= 0.0);
}

#[test]
fn malformed_off_exits_2_with_line() {
    let path = scratch("bad.off");
    std::fs::write(&path, "OFF\n4 4 0\n0 0 0\n1 0 0\n0 1 x\n0 0 1\n").unwrap();
    let out = stressflex(&["analyze", "--off", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "input");
    assert_eq!(err["error"]["line"], 5);
}

#[test]
fn off_input_matches_named_model() {
    let path = scratch("cube.off");
    let mut off = String::from("OFF\n8 6 0\n");
    for i in 0..8 {
        let c = |b: usize| if i >> b & 1 == 1 { "1" } else { "-1" };
        off.push_str(&format!("{} {} {}\n", c(0), c(1), c(2)));
    }
    for face in ["4 0 2 3 1", "4 4 5 7 6", "4 0 1 5 4", "4 2 6 7 3", "4 0 4 6 2", "4 1 3 7 5"] {
        off.push_str(face);
        off.push('\n');
    }
    std::fs::write(&path, off).unwrap();
    let r = json(&["analyze", "--off", path.to_str().unwrap()]);
    assert_eq!(r["input"]["kind"], "off");
    assert_eq!(r["dimensions"]["stress_dim"], 1);
    assert_eq!(r["dimensions"]["nontrivial_flex_dim"], 2);
}

#[test]
fn bad_flags_exit_2() {
    assert_eq!(stressflex(&["sweep", "--model", "cube", "--count", "0"]).status.code(), Some(2));
    assert_eq!(stressflex(&["analyze", "--model", "dodecahedron"]).status.code(), Some(2));
    assert_eq!(stressflex(&["analyze", "--model", "cube", "--apex", "1,2"]).status.code(), Some(2));
    assert_eq!(stressflex(&["analyze", "--model", "cube", "--tol-rank", "-1"]).status.code(), Some(2));
}

#[test]
fn random_sweep_holds_everywhere() {
    let r = json(&["sweep", "--random-simple", "--planes", "10", "--count", "100", "--apex", "interior"]);
    let s = &r["summary"];
    assert_eq!(s["instances"], 100);
    assert_eq!(s["holds"].as_u64().unwrap() + s["vacuous"].as_u64().unwrap(), 100);
    assert!(f(&s["max_relative"]) <= 1e-8);
}

#[test]
fn exterior_cube_sweep_holds() {
    let r = json(&["sweep", "--model", "cube", "--apex", "exterior-random", "--count", "50"]);
    assert_eq!(r["summary"]["verdict"], "holds");
    assert_eq!(r["rows"].as_array().unwrap().len(), 50);
}

#[test]
fn sweep_csv_and_json_agree() {
    let args = ["sweep", "--model", "cube", "--count", "5"];
    let j = json(&args);
    let out = stressflex(&[&args[..], &["--format", "csv"]].concat());
    assert!(out.status.success());
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let headers = reader.headers().unwrap().clone();
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let records: Vec<_> = reader.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), 5);
    for (rec, row) in records.iter().zip(j["rows"].as_array().unwrap()) {
        assert_eq!(rec[col("seed")].parse::<u64>().unwrap(), row["seed"].as_u64().unwrap());
        assert_eq!(rec[col("max_relative")].parse::<f64>().unwrap(), f(&row["max_relative"]));
        assert_eq!(&rec[col("verdict")], row["verdict"].as_str().unwrap());
    }
}

#[test]
fn slide_breaks_the_condition() {
    let r = json(&["slide", "--model", "cube", "--apex", "centroid", "--seed", "3"]);
    assert_eq!(r["dims_preserved"], true);
    assert!(f(&r["max_relative_before"]) <= 1e-8);
    assert!(f(&r["max_relative_after"]) > 1e-3);
}

#[test]
fn unit_slide_changes_nothing() {
    let r = json(&["slide", "--model", "cube", "--unit-factors"]);
    assert_eq!(r["before"], r["after"]);
    assert_eq!(r["max_relative_before"], r["max_relative_after"]);
}

#[test]
fn rhombic_dodecahedron_slide_keeps_dimensions() {
    let r = json(&["slide", "--model", "rhombic_dodecahedron"]);
    assert_eq!(r["dims_preserved"], true);
    assert_eq!(r["before"]["dimensions"]["stress_dim"], 2);
    assert_eq!(r["before"]["dimensions"]["nontrivial_flex_dim"], 3);
}

#[test]
fn project_cube_holds_and_agrees() {
    let r = json(&["project", "--model", "cube", "--seed", "1"]);
    assert_eq!(r["projection"]["verdict"], "holds");
    assert!(f(&r["projection"]["max_cond1"]) <= 1e-8);
    assert!(f(&r["projection"]["max_cond2"]) <= 1e-8);
    assert_eq!(r["verdicts_agree"], true);
}

#[test]
fn project_tetrahedron_has_no_nontrivial_rows_failing() {
    let r = json(&["project", "--model", "tetrahedron"]);
    assert_eq!(r["projection"]["nontrivial_flex_dim"], 0);
    assert_eq!(r["projection"]["verdict"], "holds");
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        &["analyze", "--random-simple", "--seed", "4", "--apex", "interior-random"][..],
        &["project", "--model", "cuboctahedron", "--seed", "2"],
    ] {
        assert_eq!(stressflex(args).stdout, stressflex(args).stdout);
    }
}

#[test]
fn out_flag_writes_file() {
    let path = scratch("cube.json");
    let _ = std::fs::remove_file(&path);
    let out = stressflex(&["analyze", "--model", "cube", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read(&path).unwrap();
    assert_eq!(written, stressflex(&["analyze", "--model", "cube"]).stdout);
}
