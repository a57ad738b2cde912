use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epigame"))
        .args(args)
        .output()
        .expect("run epigame")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn records(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("epigame-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn solve_pd() {
    let o = run(&["solve", &data("pd.game"), "--property", "sd_l"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "outcome: {D} | {D}\nclosure ordinal: 1\n");
}

#[test]
fn solve_trace_drops_b_at_stage_one() {
    let o = run(&["solve", &data("g32.game"), "--property", "msd_l", "--trace"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("stage 0: {T,M,B} | {L,R}\n"), "{out}");
    assert!(out.contains("stage 1: {T,M} | {L,R}\n"), "{out}");
}

#[test]
fn per_player_properties() {
    let o = run(&["--format", "json-lines", "solve", &data("pd.game"), "-p", "sd_l,br_g"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(records(&o)[0]["property"], "sd_l,br_g");
    let o = run(&["solve", &data("pd.game"), "-p", "sd_l,sd_l,sd_l"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_property_is_a_usage_error() {
    let o = run(&["solve", &data("pd.game"), "--property", "xd_l"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown property `xd_l`"));
}

#[test]
fn missing_file_is_a_usage_error() {
    let o = run(&["solve", "/nonexistent/x.game", "--property", "sd_l"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn rationality_announcements() {
    let o = run(&[
        "--format",
        "json-lines",
        "announce",
        &data("pd.game"),
        "-p",
        "sd_g",
        "--rationality",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r = &records(&o)[0];
    assert_eq!(r["terminal"], serde_json::json!(["(D,D)"]));
    assert_eq!(r["models"], 2);

    let o = run(&["announce", &data("pd.game"), "-p", "sd_l", "--rationality"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("local property: identity announcements"));
    assert!(stdout(&o).contains("terminal: 4 states"));
}

#[test]
fn emitted_model_reloads() {
    let out = tmp("pd_final.emodel");
    let o = run(&[
        "announce",
        &data("pd.game"),
        "-p",
        "sd_g",
        "--rationality",
        "--emit-model",
        &out.to_string_lossy(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    // The emitted model names its game by file name; put it next to a copy.
    std::fs::copy(data("pd.game"), out.with_file_name("pd.game")).unwrap();
    let o = run(&["eval", &out.to_string_lossy(), "--formula", "rat"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "{(D,D)}\n");
}

#[test]
fn figure_two_announcement() {
    let o = run(&["announce", &data("fig2.emodel"), "--events", &data("fig2.events")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("states: {}"), "{out}");
    assert!(out.contains("not a model of G_E = {U} | {R}"), "{out}");
}

#[test]
fn eval_common_belief_and_formula3() {
    let o = run(&[
        "eval",
        &data("pd_belief.emodel"),
        "--formula",
        "CB(rat)",
        "--property",
        "sd_g",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "{w1 w2}\n");
    let o = run(&[
        "--format",
        "json-lines",
        "eval",
        &data("pd_belief.emodel"),
        "-f",
        "rat & CB(rat) -> nu x. O x",
    ]);
    assert_eq!(records(&o)[0]["valid"], true);
}

#[test]
fn malformed_formula_reports_position() {
    let o = run(&["eval", &data("pd_belief.emodel"), "--formula", "rat & (Box"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("position 11"), "{}", stderr(&o));
}

#[test]
fn check_epist1_passes() {
    let o = run(&["check", "epist1", "--random", "40", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("0 failed"));
}

#[test]
fn check_all_reports_every_check() {
    let args = ["--format", "json-lines", "--seed", "1", "check", "all", "--random", "2"];
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let recs = records(&o);
    let checks: Vec<&Value> = recs.iter().filter(|r| r.get("status").is_some()).collect();
    assert!(checks.len() >= 10);
    assert!(checks
        .iter()
        .all(|r| r["status"] == "pass" && r["counterexample"].is_null()));
    for field in ["name", "status", "seed", "counterexample"] {
        assert!(checks.iter().all(|r| r.get(field).is_some()), "{field}");
    }
}

#[test]
fn reports_are_deterministic() {
    let args = [
        "--format",
        "json-lines",
        "--seed",
        "5",
        "check",
        "notes",
        "--random",
        "4",
    ];
    let body = |o: &Output| {
        let mut recs = records(o);
        recs.last_mut().unwrap().as_object_mut().unwrap().remove("wall_ms");
        recs
    };
    let a = run(&args);
    let b = run(&[
        "--jobs",
        "1",
        "--format",
        "json-lines",
        "--seed",
        "5",
        "check",
        "notes",
        "--random",
        "4",
    ]);
    assert_eq!(body(&a), body(&b));
}

#[test]
fn replaying_one_instance() {
    let o = run(&[
        "--seed",
        "3",
        "check",
        "epist1",
        "--only",
        "epist1.belief",
        "--instance",
        "7",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("epist1.belief"));
    let o = run(&["check", "epist1", "--only", "no.such"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn guard_refuses_wd_g() {
    let o = run(&["check", "epist1", "--property", "wd_g", "--random", "30"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("non-monotonic property `wd_g`"), "{}", stderr(&o));
}

#[test]
fn unknown_suite() {
    let o = run(&["check", "bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn derive_verdicts() {
    let o = run(&["derive", &data("formula3.deriv")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "valid: CB(rat) & rat -> nu x. O x\n");

    let bad = tmp("bad.deriv");
    let text = std::fs::read_to_string(data("formula3.deriv"))
        .unwrap()
        .replace("chi=CB(rat) & rat", "chi=rat");
    std::fs::write(&bad, text).unwrap();
    let o = run(&["derive", &bad.to_string_lossy()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("invalid step 4:"), "{}", stdout(&o));

    let empty = tmp("empty.deriv");
    std::fs::write(&empty, "").unwrap();
    let o = run(&["derive", &empty.to_string_lossy()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "invalid: no steps\n");
}
