use std::path::Path;
use std::process::{Command, Output};

use cfpart::{build_e, involution, Partition, Triple};

fn cfpart(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cfpart"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cfpart(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(cfpart(&["enumerate"]).status.code(), Some(2));
    assert_eq!(
        cfpart(&["enumerate", "--d", "0", "--count-only"]).status.code(),
        Some(2)
    );
    assert_eq!(cfpart(&["weak-classes", "--d", "4"]).status.code(), Some(2));
    assert_eq!(
        cfpart(&["involve", "--in", "/nonexistent", "--triple", "1,2,3"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn involve_matches_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let p = build_e(3);
    let input = write(dir.path(), "p.txt", &p.to_text());
    let o = cfpart(&["involve", "--in", &input, "--triple", "1,2,3"]);
    assert_eq!(o.status.code(), Some(0));
    let got = Partition::from_json(&stdout(&o)).unwrap();
    assert_eq!(got, involution(&p, Triple::new(1, 2, 3).unwrap()).unwrap());
    let text = cfpart(&["--format", "text", "involve", "--in", &input, "--triple", "1,2,3"]);
    assert_eq!(Partition::from_text(&stdout(&text)).unwrap(), got);
}

#[test]
fn enumerate_lists_json_lines() {
    let o = cfpart(&["enumerate", "--d", "2"]);
    let parts: Vec<Partition> = stdout(&o).lines().map(|l| Partition::from_json(l).unwrap()).collect();
    assert_eq!(parts.len(), 12);
    assert!(parts.iter().all(Partition::is_cycle_free));
    let fixed = cfpart(&["enumerate", "--d", "2", "--fixed", "1-2:1", "--count-only"]);
    assert_eq!(stdout(&fixed), "6");
}

#[test]
fn path_and_sign() {
    let dir = tempfile::tempdir().unwrap();
    let p = build_e(2);
    let q = involution(&p, Triple::new(1, 2, 3).unwrap()).unwrap();
    let a = write(dir.path(), "a.json", &p.to_json());
    let b = write(dir.path(), "b.json", &q.to_json());
    let o = cfpart(&["path", "--in", &a, "--to", &b]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["length"], 1);
    assert_eq!(stdout(&cfpart(&["sign", "--in", &a])), r#"{"sign":1}"#);
    assert_eq!(stdout(&cfpart(&["--format", "text", "sign", "--in", &b])), "-1");
}

#[test]
fn verify_twinstar_prints_its_seed() {
    let o = cfpart(&["--format", "text", "verify-twinstar", "--count", "3", "--seed", "42"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("seed 42"));
    let unseeded = cfpart(&["verify-twinstar", "--count", "1"]);
    assert!(String::from_utf8_lossy(&unseeded.stderr).contains("seed "));
}

#[test]
fn tiny_budget_is_a_verification_failure() {
    let o = cfpart(&["verify-twinstar", "--count", "2", "--seed", "1", "--budget", "0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn exhaustive_run_needs_the_override() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("runs.jsonl").display().to_string();
    let o = cfpart(&["verify-twinstar", "--exhaustive", "--out", &out]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn orbit_checkpoints_through_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_cfpart"))
        .args(["orbit", "--d", "3", "--max-depth", "3", "--checkpoint-interval", "1"])
        .env("CFPART_CHECKPOINT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["complete"], false);
    let ckpt = v["checkpoint_ref"].as_str().unwrap().to_string();
    let done = cfpart(&["orbit", "--resume", &ckpt]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&done)).unwrap();
    assert_eq!(v["size"], 66240);
    assert_eq!(v["parity_consistent"], true);
}

#[test]
fn reductions_emit_replayable_traces() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "e4.txt", &build_e(4).to_text());
    let o = cfpart(&["reduce-d4", "--in", &input]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["types"].as_array().unwrap().last().unwrap(), 19);
    let trace: cfpart::reduction::ReductionTrace = serde_json::from_value(v).unwrap();
    trace.replay().unwrap();
    let o = cfpart(&["reduce-path", "--in", &input, "--class", "2"]);
    let trace: cfpart::reduction::ReductionTrace = serde_json::from_str(&stdout(&o)).unwrap();
    trace.replay().unwrap();
}

#[test]
fn eval_dets2_and_classify_tree() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "e2.txt", &build_e(2).to_text());
    assert_eq!(
        stdout(&cfpart(&["eval-dets2", "--indicator", &input])),
        r#"{"value":"1/1"}"#
    );
    let e3 = write(dir.path(), "e3.txt", &build_e(3).to_text());
    assert_eq!(cfpart(&["eval-dets2", "--indicator", &e3]).status.code(), Some(2));
    let o = cfpart(&["classify-tree", "--edges", "1-2,2-3,3-4,4-5,5-6,6-7,7-8"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["t_label"], 1);
}

#[test]
fn normalize_symmetry_round_trip() {
    let o = cfpart(&[
        "normalize-symmetry",
        "--d",
        "3",
        "--sigma",
        "2,1,3,4,5,6",
        "--tau",
        "2,1,3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let word: cfpart::InvolutionWord = serde_json::from_value(v["word"].clone()).unwrap();
    let g = cfpart::SymmetryElement::new(
        cfpart::Perm::from_images(&[2, 1, 3, 4, 5, 6]).unwrap(),
        cfpart::Perm::from_images(&[2, 1, 3]).unwrap(),
    )
    .unwrap();
    assert_eq!(word.apply(&build_e(3)).unwrap(), cfpart::act(&build_e(3), &g).unwrap());
}
