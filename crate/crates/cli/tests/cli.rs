use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn popctl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_popctl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn gen_to(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name).display().to_string();
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", &path]);
    let out = popctl(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn example_one_is_controllable() {
    let dir = tempfile::tempdir().unwrap();
    let mdp = gen_to(dir.path(), "ex1.json", &["example", "1"]);
    let out = popctl(&["decide-control", &mdp]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["answer"], "yes");
    assert_eq!(v["method"], "fixpoint");
    assert!(v["fixpoint_index"].is_u64());
    assert_eq!(v["win_downset"][0]["s"], "omega");
}

#[test]
fn example_two_sweep_finds_eight() {
    let dir = tempfile::tempdir().unwrap();
    let mdp = gen_to(dir.path(), "ex2.json", &["example", "2"]);
    let out = popctl(&["decide-control", &mdp, "--method", "sweep", "--max-n", "8"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["answer"], "no");
    assert_eq!(v["witness_n"], 8);
}

#[test]
fn gadget_sfp_and_reach() {
    let dir = tempfile::tempdir().unwrap();
    let sfp = gen_to(dir.path(), "g2.json", &["gadget", "2"]);
    let v = json(&popctl(&["decide-sfp", &sfp]));
    assert_eq!(v["answer"], "yes");
    assert_eq!(v["method"], "simple-sfp");
    let v = json(&popctl(&["oracle", "reach", &sfp, "--n", "3"]));
    assert_eq!(v["reached"], true);
    let last = v["configurations"].as_array().unwrap().last().unwrap().clone();
    assert_eq!(last["t2"], 3);
}

#[test]
fn nfa_reduction_of_disjoint_languages_is_no() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    std::fs::write(
        &a,
        r#"{"states":["p0","p1"],"alphabet":["x","y"],"initial":["p0"],"final":["p1"],
            "transitions":[{"from":"p0","letter":"x","to":"p1"}]}"#,
    )
    .unwrap();
    std::fs::write(
        &b,
        r#"{"states":["u0","u1","u2"],"alphabet":["x","y"],"initial":["u0"],"final":["u2"],
            "transitions":[{"from":"u0","letter":"y","to":"u1"},{"from":"u1","letter":"y","to":"u2"}]}"#,
    )
    .unwrap();
    let sfp = gen_to(dir.path(), "red.json", &["nfa-reduction", &a.display().to_string(), &b.display().to_string()]);
    assert_eq!(json(&popctl(&["decide-sfp", &sfp]))["answer"], "no");
    assert_eq!(json(&popctl(&["oracle", "reach", &sfp, "--n", "2"]))["reached"], false);
}

#[test]
fn limitedness_of_a_counter() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.json");
    std::fs::write(
        &path,
        r#"{"states":["q"],"initial":"q","alphabet":["x"],
            "transitions":[{"from":"q","letter":"x","cost":1,"to":"q"}],
            "final_costs":{"q":0}}"#,
    )
    .unwrap();
    let v = json(&popctl(&["limitedness", &path.display().to_string(), "--witness", "20"]));
    assert_eq!(v["bounded"], false);
    assert!(v["witness"]["value"].as_u64().unwrap() >= 20);
}

#[test]
fn corpus_green_then_red() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().display().to_string();
    let out = popctl(&["corpus", &d, "--generate", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(!json(&out)["fixtures"].as_array().unwrap().is_empty());

    let fixture = dir.path().join("gadget_k1.json");
    let text = std::fs::read_to_string(&fixture).unwrap();
    std::fs::write(&fixture, text.replace("\"expected\": \"yes\"", "\"expected\": \"no\"")).unwrap();
    let out = popctl(&["corpus", &d]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn exhausted_budget_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let mdp = gen_to(dir.path(), "ex2.json", &["example", "2"]);
    let out = popctl(&["decide-control", &mdp, "--method", "sweep", "--max-n", "8", "--arena-budget", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn random_mdp_is_seeded() {
    let a = popctl(&["gen", "random-mdp", "--seed", "5"]);
    let b = popctl(&["gen", "random-mdp", "--seed", "5"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["states"].as_array().unwrap().len(), 4);
}

#[test]
fn bad_input_exits_one() {
    assert_eq!(popctl(&["decide-sfp", "/nonexistent.json"]).status.code(), Some(1));
    assert_eq!(popctl(&["gen", "example", "4"]).status.code(), Some(1));
}
