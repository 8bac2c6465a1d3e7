use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crnrelay")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = run(&all);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("valid json")
}

#[test]
fn siphons_default_model() {
    let v = json(&["siphons"]);
    let members: Vec<Vec<String>> = v["minimal_siphons"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| serde_json::from_value(s["members"].clone()).unwrap())
        .collect();
    assert_eq!(members.len(), 4);
    assert!(members.contains(&vec!["S1".to_string(), "B1".to_string()]));
    assert_eq!(v["context"]["parameters"]["beta1"], "3");
}

#[test]
fn relay_graph_dot() {
    let o = run(&["relay-graph", "--format", "dot"]);
    assert!(o.status.success());
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph relay {"));
    assert!(dot.contains("{S1,B1} R=3/2 RelayHolds"));
}

#[test]
fn relay_strict_verdicts() {
    let args = ["relay", "--sigma", "U,W,S1,B1,S2,B2", "--sigma-prime", "W,S1,B1,S2,B2"];
    let loose = run(&args);
    assert!(stdout(&loose).contains("SuccessorExistsUnstable"));
    let mut strict = args.to_vec();
    strict.push("--strict-paper-verdicts");
    assert!(stdout(&run(&strict)).contains("NoRelay"));
}

#[test]
fn set_changes_the_point() {
    let v = json(&["invasion", "--sigma", "S1,B1", "--equilibrium", "gOSN", "--set", "beta1=1"]);
    assert_eq!(v["value"], "1/2");
    assert_eq!(v["comparison_to_one"], "Less");
}

#[test]
fn symbolic_invasion_function() {
    let o = run(&["invasion", "--sigma", "S2,B2"]);
    assert!(stdout(&o).contains("beta2"));
}

#[test]
fn out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lattice.json");
    let o = run(&["lattice", "--format", "json", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["nodes"].as_array().unwrap().len(), 15);
}

#[test]
fn model_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sir.crn");
    std::fs::write(
        &path,
        "# sir\n[variables]\nS, I\n[parameters]\nb, g, L, m\n[equations]\nS' = L - m*S - b*S*I\nI' = b*S*I - (g + m)*I\n[values]\nb = 2\ng = 1/2\nL = 1\nm = 1\n",
    )
    .unwrap();
    let o = run(&["--model", path.to_str().unwrap(), "relay-graph"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("{I}"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--set", "beta1=abc", "siphons"]).status.code(), Some(2));
    assert_eq!(run(&["--model", "no_such_model", "siphons"]).status.code(), Some(2));
    assert_eq!(run(&["--set", "nope=1", "siphons"]).status.code(), Some(2));
    assert_eq!(run(&["stability", "--equilibrium", "ZZZ"]).status.code(), Some(3));
    assert_eq!(run(&["relay", "--sigma", "U", "--sigma-prime", "W"]).status.code(), Some(3));
    assert_eq!(run(&["siphons", "--format", "dot"]).status.code(), Some(3));
}

#[test]
fn rank_one_default_edge() {
    let v = json(&["--model", "osn_omega_pos", "rank-one-bound"]);
    assert!(v["identity_checks"].as_array().unwrap().iter().all(|c| c[1] == true));
}
