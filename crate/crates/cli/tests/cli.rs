//! Exit-code and input-handling checks for the binary.

use std::process::Command;

fn run(args: &[&str]) -> (Option<i32>, Vec<u8>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_ramsey"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code(), out.stdout, out.stderr)
}

#[test]
fn malformed_input_exits_one_with_diagnostics() {
    let (code, _, stderr) = run(&["arrow", "--category", "direct", "--A", "bogus",
        "--B", "lo:3", "--C", "lo:6", "--k", "2", "--t", "1"]);
    assert_eq!(code, Some(1));
    assert!(!stderr.is_empty());

    let (code, _, _) = run(&["enumerate", "rsurj", "--n", "x", "--m", "2"]);
    assert_eq!(code, Some(1));

    let (code, _, _) = run(&["star", "--scheme", "dual-linear", "--h", "{not json", "--f", "{}"]);
    assert_eq!(code, Some(1));
}

#[test]
fn cap_exceeded_exits_two_with_structured_error() {
    let (code, stdout, _) = run(&["arrow", "--category", "direct", "--A", "lo:2",
        "--B", "lo:3", "--C", "lo:6", "--k", "2", "--t", "1",
        "--mode", "naive", "--max-colorings", "10"]);
    assert_eq!(code, Some(2));
    let text = String::from_utf8_lossy(&stdout);
    assert!(text.contains("\"error\""), "expected a JSON error, got {text}");
    assert!(text.contains("would require"));
}

#[test]
fn invalid_query_exits_two() {
    // hom(B, C) empty in the dual category
    let (code, stdout, _) = run(&["arrow", "--category", "dual", "--A", "2",
        "--B", "5", "--C", "4", "--k", "2", "--t", "1"]);
    assert_eq!(code, Some(2));
    assert!(String::from_utf8_lossy(&stdout).contains("\"error\""));
}

#[test]
fn coloring_cap_env_override_applies() {
    let out = Command::new(env!("CARGO_BIN_EXE_ramsey"))
        .args(["arrow", "--category", "direct", "--A", "lo:2", "--B", "lo:3",
               "--C", "lo:5", "--k", "2", "--t", "1", "--mode", "naive"])
        .env("RAMSEY_CAP_COLORINGS", "10")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("cap is 10"));
}

#[test]
fn structure_files_round_trip_through_commands() {
    let dir = std::env::temp_dir().join(format!("ramsey-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let stage_path = dir.join("stage.json");
    let (code, stdout, _) = run(&["fraisse-stage", "--age", "graph", "--rounds", "1",
        "--seed-size", "1", "--out", stage_path.to_str().unwrap()]);
    assert_eq!(code, Some(0));
    assert!(stdout.is_empty());
    let text = std::fs::read_to_string(&stage_path).unwrap();
    let stage: serde_json::Value = serde_json::from_str(&text).unwrap();
    let structure = serde_json::to_string(&stage["structure"]).unwrap();

    let graph_path = dir.join("graph.json");
    std::fs::write(&graph_path, structure).unwrap();
    let spec = format!("graph:@{}", graph_path.display());
    let (code, stdout, _) = run(&["enumerate", "emb", "--A", &spec, "--B", &spec]);
    assert_eq!(code, Some(0));
    assert!(String::from_utf8_lossy(&stdout).contains("\"count\":1"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn selftest_single_suite_runs() {
    let (code, stdout, _) = run(&["selftest", "rigidsurj"]);
    assert_eq!(code, Some(0));
    let text = String::from_utf8_lossy(&stdout);
    assert!(text.contains("\"suite\":\"rigidsurj\""));
    assert!(text.contains("\"ok\":true"));

    let (code, _, _) = run(&["selftest", "nonsense"]);
    assert_eq!(code, Some(2));
}
