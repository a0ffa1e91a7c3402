use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn qhalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qhalg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn emit(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut all = vec!["family"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--output", path.to_str().unwrap()]);
    let o = qhalg(&all);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

#[test]
fn anc_family_checks_clean() {
    let dir = TempDir::new().unwrap();
    let a4 = emit(dir.path(), "a4.json", &["--name", "an-c", "--n", "4", "--c", "1,1;0,1"]);
    let o = qhalg(&["check", "--input", a4.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn lattice_of_p3_over_f2() {
    let dir = TempDir::new().unwrap();
    let a4 = emit(dir.path(), "a4.json", &["--name", "an-c", "--n", "4", "--c", "1,1;0,1"]);
    let dot = dir.path().join("p3.dot");
    let o = qhalg(&[
        "lattice",
        "--module",
        "P:3",
        "--field",
        "Fp:2",
        "--input",
        a4.to_str().unwrap(),
        "--dot",
        dot.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("10 submodules"), "{}", stdout(&o));
    let graph = std::fs::read_to_string(dot).unwrap();
    assert!(graph.starts_with("digraph"));
    // I(3) has one submodule fewer
    let o = qhalg(&["lattice", "--module", "I:3", "--input", a4.to_str().unwrap()]);
    assert!(stdout(&o).contains("9 submodules"), "{}", stdout(&o));
}

#[test]
fn example4_factor_fails_axiom_3() {
    let dir = TempDir::new().unwrap();
    let a5 = emit(dir.path(), "a5.json", &["--name", "example4", "--q", "0", "--factor", "5"]);
    let o = qhalg(&["check", "--input", a5.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let failing: Vec<&str> = out.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(failing.len(), 1, "{out}");
    assert!(failing[0].contains("axiom (3)"));
}

#[test]
fn json_report_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a4 = emit(dir.path(), "a4.json", &["--name", "an-c", "--n", "4", "--c", "1,2;0,1"]);
    let run = || stdout(&qhalg(&["check", "--json", "--input", a4.to_str().unwrap()]));
    let first = run();
    assert_eq!(first, run());
    let v: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["command"], "check");
    assert_eq!(v["input_digest"].as_str().unwrap().len(), 64);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
    assert_eq!(v["values"]["dim"], 25);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(qhalg(&["check"]).status.code(), Some(2));
    assert_eq!(qhalg(&["frobnicate"]).status.code(), Some(2));
    let o = qhalg(&["check", "--input", "/nonexistent/algebra.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    let o = qhalg(&["family", "--name", "an-c", "--n", "4", "--c", "1,1;1,1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn family_round_trips_through_stdout() {
    let o = qhalg(&["family", "--name", "auslander", "--m", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let p = qhalg::format::parse(&stdout(&o)).unwrap();
    assert_eq!(p, qhalg::presets::make_auslander(3).unwrap());
}

#[test]
fn ringel_dual_of_a4() {
    let dir = TempDir::new().unwrap();
    let a4 = emit(dir.path(), "a4.json", &["--name", "an-c", "--n", "4", "--c", "1,3;0,1"]);
    let dual = emit(dir.path(), "dual.json", &["--name", "an-c", "--n", "4", "--c", "1,-3;0,1"]);
    let wrong = emit(dir.path(), "wrong.json", &["--name", "an-c", "--n", "4", "--c", "1,0;3,1"]);
    let o = qhalg(&["ringel", "--input", a4.to_str().unwrap(), "--against", dual.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = qhalg(&["ringel", "--input", a4.to_str().unwrap(), "--against", wrong.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}

#[test]
fn sl3_commands() {
    let dir = TempDir::new().unwrap();
    let sl3 = emit(dir.path(), "sl3.json", &["--name", "sl3"]);
    let input = sl3.to_str().unwrap();
    for cmd in ["check", "theorem-a", "lemma-2-2", "lemma-3-2", "tilting", "theorem-b", "basis"] {
        let o = qhalg(&[cmd, "--input", input]);
        assert_eq!(o.status.code(), Some(0), "{cmd}: {}", stdout(&o));
    }
    let o = qhalg(&["extensions", "--input", input, "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["values"]["count"], 4);
}
