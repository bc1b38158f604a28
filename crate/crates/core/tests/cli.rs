//! End-to-end checks of the command-line interface: exit codes, canonical
//! output, and byte-identical reruns.

use std::process::Command;

fn run(args: &[&str]) -> (String, String, Option<i32>) {
    let out = Command::new(env!("CARGO_BIN_EXE_virasoro"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code(),
    )
}

fn write_curve(name: &str, text: &str) -> String {
    let path = std::env::temp_dir().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn validate_and_exit_codes() {
    let good = write_curve("vira_ok.curve", "n = 5\na0 = 1\na4 = -1\n");
    let (stdout, _, code) = run(&["validate", "--curve", &good]);
    assert_eq!(code, Some(0));
    assert!(stdout.contains("genus: 2"));

    // degenerate curve: triple root -> parse-class failure, exit 2
    let bad = write_curve("vira_bad.curve", "n = 3\na0 = 1\n");
    let (_, stderr, code) = run(&["validate", "--curve", &bad]);
    assert_eq!(code, Some(2));
    assert!(stderr.contains("degenerate curve"));

    // missing file -> exit 2
    let (_, _, code) = run(&["validate", "--curve", "/nonexistent.curve"]);
    assert_eq!(code, Some(2));
}

#[test]
fn graphs_listing_matches_enumeration() {
    let (stdout, _, code) = run(&["graphs", "--n", "3"]);
    assert_eq!(code, Some(0));
    assert!(stdout.contains("total: 18"));
    assert!(stdout.contains("1->2,2->1"));
}

#[test]
fn byte_identical_reruns() {
    let good = write_curve("vira_det.curve", "n = 3\na0 = 4\na2 = -4\na3 = 1\n");
    for format in ["text", "structured"] {
        let a = run(&["onepoint", "--curve", &good, "--format", format, "--seed", "7"]);
        let b = run(&["onepoint", "--curve", &good, "--format", format, "--seed", "7"]);
        assert_eq!(a, b, "output must be byte-identical across reruns");
    }
}

#[test]
fn structured_output_is_json() {
    let good = write_curve("vira_json.curve", "n = 3\na0 = 4\na2 = -4\na3 = 1\n");
    let (stdout, _, code) = run(&["onepoint", "--curve", &good, "--format", "structured"]);
    assert_eq!(code, Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout).expect("valid json");
    assert_eq!(doc["command"], "onepoint");
    assert_eq!(doc["passed"], true);
    assert!(doc["expr:one_point"]["components"].is_array());
}
