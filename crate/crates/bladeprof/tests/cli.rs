use std::path::Path;
use std::process::{Command, Output};

use bladeprof::run_cli;

const FORWARD: &str = "problem = forward
profile.kind = polynomial
profile.coeffs = 1,-1
frame.b = 1
frame.m0 = -1
solver.w0 = -0.2
solver.method = rk4
solver.t_end = 2
";

const RENDER_LAW: &str = "problem = render
law.kind = power
law.params = 1,1
frame.b = 1
frame.m0 = -1
render.blades = 7
";

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bladeprof")).args(args).current_dir(dir).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

#[test]
fn forward_writes_trajectory_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "f.cfg", FORWARD);
    let out = run(dir.path(), &["forward", "--spec", "f.cfg"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("forward: status=reached_t_end"), "{stdout}");
    assert!(stdout.trim_end().ends_with("out=forward.csv"), "{stdout}");
    let csv = std::fs::read_to_string(dir.path().join("forward.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("# bladeprof v1"));
    assert_eq!(lines.next(), Some("t,Y,Ydot,X,Xdot,v"));
    let last: Vec<f64> = csv.lines().last().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert!((last[0] - 2.0).abs() < 1e-12 && (last[1] - 0.6).abs() < 1e-12, "{last:?}");
}

#[test]
fn output_path_precedence() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "f.cfg", &format!("{FORWARD}output.path = from-spec.csv\n"));
    assert!(run(dir.path(), &["forward", "--spec", "f.cfg"]).status.success());
    assert!(dir.path().join("from-spec.csv").exists());
    assert!(run(dir.path(), &["forward", "--spec", "f.cfg", "--out", "flag.csv"]).status.success());
    assert!(dir.path().join("flag.csv").exists());
    assert!(!dir.path().join("forward.csv").exists());
}

#[test]
fn problem_must_match_command() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "f.cfg", FORWARD);
    let out = run(dir.path(), &["inverse", "--spec", "f.cfg"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("inverse.csv").exists());
}

#[test]
fn io_failures_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["forward", "--spec", "missing.cfg"]).status.code(), Some(4));
    write(dir.path(), "f.cfg", FORWARD);
    let out = run(dir.path(), &["forward", "--spec", "f.cfg", "--out", "no/such/dir/x.csv"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no/such/dir/x.csv"));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["warp"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["forward"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn step_limit_is_numeric_failure() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "f.cfg", &format!("{FORWARD}solver.max_steps = 10\n"));
    let out = run(dir.path(), &["forward", "--spec", "f.cfg"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("step_limit"));
    assert!(!dir.path().join("forward.csv").exists());
}

#[test]
fn geometry_reports_anchor() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "g.cfg",
        "problem = geometry\nprofile.kind = polynomial\nprofile.coeffs = 0,1\nprofile.domain = 0,1\nframe.b = 1\nframe.m0 = 1\n",
    );
    let out = run(dir.path(), &["geometry", "--spec", "g.cfg"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("anchor=fail"));
    let csv = std::fs::read_to_string(dir.path().join("geometry.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2 + 101);
    assert!(csv.lines().nth(2).unwrap().contains(",inf,"));
}

#[test]
fn impeller_svg_structure() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "r.cfg", RENDER_LAW);
    assert!(run(dir.path(), &["render", "--spec", "r.cfg"]).status.success());
    let text = std::fs::read_to_string(dir.path().join("render.svg")).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap();
    assert_eq!(doc.root_element().tag_name().name(), "svg");
    let polylines: Vec<_> = doc.descendants().filter(|n| n.has_tag_name("polyline")).collect();
    assert_eq!(polylines.len(), 7);
    for line in polylines {
        let first = line.attribute("points").unwrap().split(' ').next().unwrap();
        let (x, y) = first.split_once(',').unwrap();
        let r = x.parse::<f64>().unwrap().hypot(y.parse().unwrap());
        assert!((r - 100.0).abs() < 1e-5, "inlet radius {r}");
    }
    assert!(doc.descendants().all(|n| !n.has_tag_name("line")));
}

#[test]
fn single_blade_svg_has_axes() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "r.cfg",
        "problem = render\nprofile.kind = linear\nprofile.coeffs = 1,-1\nprofile.domain = 0,1\n",
    );
    assert!(run(dir.path(), &["render", "--spec", "r.cfg", "--out", "blade.svg"]).status.success());
    let text = std::fs::read_to_string(dir.path().join("blade.svg")).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap();
    assert_eq!(doc.descendants().filter(|n| n.has_tag_name("polyline")).count(), 1);
    assert_eq!(doc.descendants().filter(|n| n.has_tag_name("line")).count(), 2);
}

#[test]
fn check_in_process() {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    assert_eq!(run_cli(["bladeprof", "check"], &mut out, &mut err), 0);
    let text = String::from_utf8(out).unwrap();
    assert!(text.lines().filter(|l| l.starts_with("PASS ")).count() >= 9);
    assert!(!text.contains("FAIL"));
    assert!(text.trim_end().ends_with("passed"));
    assert!(err.is_empty());
}
