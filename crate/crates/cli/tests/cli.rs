use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

// 0 -a-> {goal .9, sink .1}
const TOY: &str = r#"{ "states": 3, "init": 0, "props": ["goal"],
  "labels": { "1": ["goal"] },
  "transitions": [
    { "from": 0, "action": "a", "branches": [ { "to": 1, "prob": 0.9 }, { "to": 2, "prob": 0.1 } ] },
    { "from": 1, "action": "a", "branches": [ { "to": 1, "prob": 1.0 } ] },
    { "from": 2, "action": "a", "branches": [ { "to": 2, "prob": 1.0 } ] } ] }"#;

const PERSIST: &str = r#"objective q0 = Pmax [ F G "goal" ]; initial q0;"#;
const REACH: &str = r#"objective q0 = Pmax [ F "goal" ]; initial q0;"#;

fn captl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_captl")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

struct Files {
    dir: TempDir,
}

impl Files {
    fn new() -> Self {
        Files { dir: TempDir::new().unwrap() }
    }

    fn put(&self, name: &str, text: &str) -> String {
        let p = self.dir.path().join(name);
        fs::write(&p, text).unwrap();
        p.display().to_string()
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn synth_prints_c_and_writes_protocol() {
    let f = Files::new();
    let (m, r) = (f.put("m.json", TOY), f.put("r.captl", PERSIST));
    let out = f.path("p.json");
    let o = captl(&["synth", "--model", &m, "--req", &r, "--algorithm", "persistence", "--epsilon", "1e-6", "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), "c=0.900000\n");
    let protocol: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(protocol["algorithm"], "persistence");
}

#[test]
fn pctl_accepts_general_requirements() {
    let f = Files::new();
    let (m, r) = (f.put("m.json", TOY), f.put("r.captl", REACH));
    let o = captl(&["synth", "--model", &m, "--req", &r, "--algorithm", "pctl"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "c=0.900000\n");
}

#[test]
fn persistence_rejects_general_requirements() {
    let f = Files::new();
    let (m, r) = (f.put("m.json", TOY), f.put("r.captl", REACH));
    let o = captl(&["synth", "--model", &m, "--req", &r, "--algorithm", "persistence"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("q0"));
}

#[test]
fn verify_prints_value_and_verdict() {
    let f = Files::new();
    let m = f.put("m.json", TOY);
    let o = captl(&["verify", "--model", &m, "--query", r#"Pmax [ F "goal" ]"#]);
    assert_eq!(stdout(&o), "0.900000\n");
    let o = captl(&["verify", "--model", &m, "--query", r#"Pmax<0.95 [ F "goal" ]"#]);
    assert_eq!(stdout(&o), "0.900000\nSAT\n");
    let o = captl(&["verify", "--model", &m, "--query", r#"Pmax [ F "nope" ]"#]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn malformed_input_exits_with_one() {
    let f = Files::new();
    let m = f.put("m.json", "{ \"states\": 2 ");
    let r = f.put("r.captl", PERSIST);
    assert_eq!(captl(&["synth", "--model", &m, "--req", &r]).status.code(), Some(1));
    assert_eq!(captl(&["synth", "--model", "/nonexistent", "--req", &r]).status.code(), Some(1));
    assert_eq!(captl(&["synth", "--req", &r]).status.code(), Some(1));
    let m = f.put("ok.json", TOY);
    assert_eq!(captl(&["synth", "--model", &m, "--req", &r, "--epsilon", "2"]).status.code(), Some(1));
}

#[test]
fn generated_robot_end_to_end() {
    let f = Files::new();
    let dir = f.path("gen");
    let o = captl(&["gen", "--case", "robot", "--size", "3x3", "--out", s(&dir)]);
    assert!(o.status.success());
    let (m, r) = (dir.join("robot_3x3.json"), dir.join("robot_3x3.captl"));
    for algorithm in ["persistence", "pctl"] {
        let o = captl(&["synth", "--model", s(&m), "--req", s(&r), "--algorithm", algorithm]);
        assert!(o.status.success());
        let c: f64 = stdout(&o).trim().strip_prefix("c=").unwrap().parse().unwrap();
        assert!(c > 0.0 && c <= 1.0);
    }
}

#[test]
fn partition_rows_cover_reach_once_per_objective() {
    let f = Files::new();
    let dir = f.path("gen");
    captl(&["gen", "--case", "robot", "--out", s(&dir)]);
    let (m, r) = (dir.join("robot_3x3.json"), dir.join("robot_3x3.captl"));
    let o = captl(&["partition", "--model", s(&m), "--req", s(&r)]);
    assert!(o.status.success());
    let mut rd = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(rd.headers().unwrap(), vec!["state", "objective", "block", "x_value"]);
    let mut per_objective = std::collections::BTreeMap::<String, Vec<usize>>::new();
    for rec in rd.records() {
        let rec = rec.unwrap();
        per_objective.entry(rec[1].to_string()).or_default().push(rec[0].parse().unwrap());
    }
    let sizes: Vec<usize> = per_objective.values().map(Vec::len).collect();
    assert!(sizes.len() > 1);
    for states in per_objective.values() {
        let mut sorted = states.clone();
        sorted.dedup();
        assert_eq!(sorted.len(), states.len());
        assert_eq!(states.len(), sizes[0]);
    }
}

#[test]
fn stats_product_states_equal_choices() {
    let o = captl(&["stats", "--case", "robot", "--size", "3x3", "--size", "6x6"]);
    assert!(o.status.success());
    let mut rd = csv::Reader::from_reader(o.stdout.as_slice());
    let h = rd.headers().unwrap().clone();
    let col = |name: &str| h.iter().position(|x| x == name).unwrap();
    let rows: Vec<_> = rd.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2);
    for r in rows {
        assert_eq!(r[col("product_states")], r[col("product_choices")]);
    }
}

#[test]
fn outputs_are_deterministic() {
    let f = Files::new();
    let dir = f.path("gen");
    captl(&["gen", "--case", "robot", "--out", s(&dir)]);
    let (m, r) = (dir.join("robot_3x3.json"), dir.join("robot_3x3.captl"));
    let run = |name: &str| {
        let out = f.path(name);
        let dot = f.path(&format!("{name}.dot"));
        captl(&["synth", "--model", s(&m), "--req", s(&r), "--out", s(&out), "--dot", s(&dot)]);
        (fs::read(out).unwrap(), fs::read(dot).unwrap())
    };
    assert_eq!(run("a"), run("b"));
    let sim = || stdout(&captl(&["simulate", "--model", s(&m), "--req", s(&r), "--runs", "500", "--seed", "3"]));
    assert_eq!(sim(), sim());
}

#[test]
fn export_dot_writes_graph() {
    let f = Files::new();
    let (m, r) = (f.put("m.json", TOY), f.put("r.captl", PERSIST));
    let o = captl(&["export-dot", "--model", &m, "--req", &r]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("digraph"));
    let o = captl(&["export-dot", "--model", &m, "--req", &r, "--algorithm", "pctl"]);
    assert!(stdout(&o).starts_with("digraph"));
}

#[test]
fn simulate_reports_estimate() {
    let f = Files::new();
    let (m, r) = (f.put("m.json", TOY), f.put("r.captl", PERSIST));
    let o = captl(&["simulate", "--model", &m, "--req", &r, "--runs", "4000", "--seed", "1", "--horizon", "10"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("c=0.900000"));
    assert!(text.contains("within_3sigma=true"), "{text}");
}
