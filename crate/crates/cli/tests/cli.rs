use std::path::Path;
use std::process::{Command, Output};

fn cubicpoles(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubicpoles"))
        .current_dir(dir)
        .env_remove("CUBICPOLES_SEED")
        .env_remove("CUBICPOLES_OUT")
        .args(args)
        .output()
        .unwrap()
}

fn json(dir: &Path, name: &str) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join(name)).unwrap()).unwrap()
}

#[test]
fn generate_then_msequence_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(
        cubicpoles(d, &["generate", "--kind", "generic12", "--seed", "5", "--out", "g.json"]).status.code(),
        Some(0)
    );
    assert_eq!(json(d, "g.json")["schema_version"], 1);
    assert_eq!(cubicpoles(d, &["msequence", "g.json", "--out", "m.json"]).status.code(), Some(0));
    let m = json(d, "m.json");
    assert_eq!(m["m_sequence"]["m1"], 2);
    assert_eq!(m["m_sequence"]["m2"], 5);
    assert_eq!(m["m_sequence"]["m3"], 9);
    assert_eq!(m["witnesses_sound"], true);
    assert_eq!(m["matches_metadata"], true);
}

#[test]
fn construct_certify_and_estimate() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    cubicpoles(d, &["generate", "--kind", "lemma-case3", "--seed", "2", "--out", "g.json"]);
    let out = cubicpoles(d, &["construct", "g.json", "--out", "c.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("elapsed"));
    let c = json(d, "c.json");
    assert_eq!(c["report"]["outcome"]["kind"], "certificate");
    assert_eq!(cubicpoles(d, &["certify", "c.json", "--out", "v.json"]).status.code(), Some(0));
    assert_eq!(json(d, "v.json")["verification"]["verified"], true);
    let out = cubicpoles(d, &["lelong", "c.json", "--csv", "u.csv", "--out", "e.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(d, "e.json")["pass"], true);
    assert!(std::fs::read_to_string(d.join("u.csv")).unwrap().contains("log_r,max_u"));
}

#[test]
fn tampered_certificate_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    cubicpoles(d, &["generate", "--kind", "generic12", "--seed", "1", "--out", "g.json"]);
    cubicpoles(d, &["construct", "g.json", "--out", "c.json"]);
    let mut c = json(d, "c.json");
    c["report"]["outcome"]["total_weight"] = "19".into();
    std::fs::write(d.join("bad.json"), c.to_string()).unwrap();
    assert_eq!(cubicpoles(d, &["certify", "bad.json", "--out", "v.json"]).status.code(), Some(3));
    assert_eq!(json(d, "v.json")["verification"]["verified"], false);
}

#[test]
fn parse_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(
        d.join("p.json"),
        "{\"schema_version\": 1,\n \"points\": {\"points\": [{\"label\": 1, \"coords\": [\"a\", \"0\", \"1\"]}]}}",
    )
    .unwrap();
    let out = cubicpoles(d, &["msequence", "p.json"]);
    assert_eq!(out.status.code(), Some(5));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    std::fs::write(d.join("v.json"), "{\"schema_version\": 9}").unwrap();
    assert_eq!(cubicpoles(d, &["msequence", "v.json"]).status.code(), Some(5));
}

#[test]
fn wrong_point_count_is_a_precondition_failure() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    cubicpoles(d, &["generate", "--kind", "example6lines", "--out", "e.json"]);
    assert_eq!(cubicpoles(d, &["construct", "e.json"]).status.code(), Some(2));
}

#[test]
fn runs_are_deterministic_and_env_mirrors_flags() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(cubicpoles(d, &["sharpness", "--seed", "7", "--out", "a.json"]).status.code(), Some(0));
    let by_env = Command::new(env!("CARGO_BIN_EXE_cubicpoles"))
        .current_dir(d)
        .env("CUBICPOLES_SEED", "7")
        .env("CUBICPOLES_JOBS", "1")
        .args(["sharpness", "--out", "b.json"])
        .output()
        .unwrap();
    assert_eq!(by_env.status.code(), Some(0));
    let a = std::fs::read(d.join("a.json")).unwrap();
    assert_eq!(a, std::fs::read(d.join("b.json")).unwrap());
    assert!(!String::from_utf8_lossy(&a).contains("elapsed"));
}

#[test]
fn enumerate_reports_maximum() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(cubicpoles(d, &["enumerate", "--cap", "2", "--out", "n.json"]).status.code(), Some(0));
    assert_eq!(json(d, "n.json")["maximum"], 5);
}
