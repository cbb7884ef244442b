use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn tropline(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropline")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn smooth_reports_cell_count() {
    let o = tropline(&["smooth", data("g3.trop").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "smooth, 27 cells");
}

#[test]
fn non_smooth_is_a_negative_answer() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("plane2.trop");
    // all coefficients zero: a single cell of volume 8/6
    std::fs::write(&p, "0 + 0x + 0y + 0z + 0x^2 + 0y^2 + 0z^2 + 0xy + 0xz + 0yz").unwrap();
    let o = tropline(&["smooth", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("not smooth"));
}

#[test]
fn line_check_exit_codes() {
    let g3 = data("g3.trop");
    let on = tropline(&["line-check", g3.to_str().unwrap(), data("g3_degenerate.json").to_str().unwrap()]);
    assert_eq!(on.status.code(), Some(0));
    let off = tropline(&["line-check", g3.to_str().unwrap(), data("off_surface.json").to_str().unwrap()]);
    assert_eq!(off.status.code(), Some(1));
}

#[test]
fn classify_degenerate_cubic_line() {
    let o = tropline(&["line-classify", data("g3.trop").to_str().unwrap(), data("g3_degenerate.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["class"], "family");
    assert_eq!(v["witness"]["direction"], serde_json::json!([-1, -1, 0]));
}

#[test]
fn exits_search_and_witness_file() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.json");
    let o = tropline(&["exits", "search", "--max", "100", "--emit-witnesses", w.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "even exceptions up to 100: 2 4 6 8 14 16 18 20 26 30 56 76");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&w).unwrap()).unwrap();
    assert_eq!(v["exceptions"].as_array().unwrap().len(), 12);
    assert!(v["witnesses"]["10"].is_array());
    let odd = tropline(&["exits", "odd", "--max", "99"]);
    assert_eq!(odd.status.code(), Some(0));
}

#[test]
fn built_family_round_trips_through_smooth_and_subdiv() {
    let dir = tempfile::tempdir().unwrap();
    let poly = dir.path().join("f.trop");
    let tri = dir.path().join("f.json");
    let o = tropline(&["build", "family", "--degree", "3", "--seed", "4", "--out", tri.to_str().unwrap(), "--poly-out", poly.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let built: Value = serde_json::from_str(&std::fs::read_to_string(&tri).unwrap()).unwrap();
    assert_eq!(built["cells"].as_array().unwrap().len(), 27);
    let s = tropline(&["smooth", poly.to_str().unwrap()]);
    assert_eq!(stdout(&s).trim(), "smooth, 27 cells");
    let sub: Value = serde_json::from_str(&stdout(&tropline(&["subdiv", poly.to_str().unwrap()]))).unwrap();
    assert_eq!(sub["cells"], built["cells"]);
}

#[test]
fn output_is_deterministic() {
    let a = tropline(&["build", "family", "--degree", "4", "--seed", "2"]);
    let b = tropline(&["build", "family", "--degree", "4", "--seed", "2"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn quadric_lines_through_cell_point() {
    let dir = tempfile::tempdir().unwrap();
    let poly = dir.path().join("q.trop");
    tropline(&["build", "family", "--degree", "2", "--poly-out", poly.to_str().unwrap()]);
    let x: Value = serde_json::from_str(&stdout(&tropline(&["surface", poly.to_str().unwrap()]))).unwrap();
    let face = x["faces"].as_array().unwrap().iter().find(|f| f["bounded"] == true).expect("compact cell");
    let vertex = &x["vertices"][face["vertices"][0].as_u64().unwrap() as usize];
    let coords: Vec<&str> = vertex["point"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    let point = format!("--point={}", coords.join(","));
    let o = tropline(&["quadric-lines", poly.to_str().unwrap(), &point]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["lines"].as_array().unwrap().len(), 2);
}

#[test]
fn lines_through_points() {
    let o = tropline(&["lines-through", "--p", "0,0,0", "--q", "1,2,3"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["type"], "(14)(23)");
    let inf = tropline(&["lines-through", "--p", "0,0,0", "--q", "1,1,-3"]);
    assert!(stdout(&inf).starts_with("infinitely many lines"));
    assert_eq!(tropline(&["lines-through", "--p", "1,1,1", "--q", "1,1,1"]).status.code(), Some(2));
}

#[test]
fn enumerate_and_usage_errors() {
    let o = tropline(&["enumerate", "gamma2"]);
    assert!(stdout(&o).starts_with("192 elementary triangulations"));
    assert_eq!(tropline(&["surface"]).status.code(), Some(2));
    assert_eq!(tropline(&["exits", "search"]).status.code(), Some(2));
}
