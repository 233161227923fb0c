use std::process::{Command, Output};

fn jconf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jconf"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn passing_suite_exits_zero_with_json() {
    let out = jconf(&["--suite", "js1", "--format", "json"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["suite"], "js1");
    assert_eq!(v["summary"]["fail"], 0);
}

#[test]
fn text_output_and_flags() {
    let out = jconf(&[
        "--suite",
        "tkk",
        "--n",
        "0",
        "--tmin",
        "-1",
        "--tmax",
        "1",
        "--jobs",
        "2",
        "--fail-fast",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("tkk"));
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(jconf(&["--suite", "nope"]).status.code(), Some(2));
    assert_eq!(
        jconf(&["--suite", "js1", "--tmin", "3", "--tmax", "-3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(jconf(&["--catalog", "J9"]).status.code(), Some(2));
    assert_eq!(jconf(&["--format", "yaml"]).status.code(), Some(2));
}

#[test]
fn catalog_matches_golden_file() {
    let out = jconf(&["--catalog", "JS1"]);
    assert_eq!(out.status.code(), Some(0));
    let got: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let golden = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../catalog/JS1.json"
    ))
    .unwrap();
    let want: serde_json::Value = serde_json::from_str(&golden).unwrap();
    assert_eq!(got, want);
}

#[test]
fn timing_adds_wall_time() {
    let out = jconf(&["--suite", "js1", "--format", "json", "--timing"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["wall_time_ms"].is_u64());
}
