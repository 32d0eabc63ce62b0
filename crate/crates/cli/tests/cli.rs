use std::process::{Command, Output};

fn run(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_heckehyp"));
    cmd.args(args);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 output")
}

#[test]
fn trace_single_prime_plain() {
    let out = run(
        &["trace", "--level", "9", "--weight", "4", "--prime", "7"],
        &[],
    );
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("trace=20"), "got {text}");
    assert!(text.contains("hijikata=20"));
    assert!(text.contains("inductive=20"));
}

#[test]
fn trace_json_is_float_free() {
    let out = run(
        &[
            "trace", "--level", "3", "--weight", "6", "--primes", "2..13", "--format", "json",
        ],
        &[],
    );
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(doc["schema"], "heckehyp/1");
    let results = doc["results"].as_array().expect("results array");
    assert_eq!(results.len(), 5); // 2, 5, 7, 11, 13
    fn no_floats(v: &serde_json::Value) {
        match v {
            serde_json::Value::Number(n) => assert!(n.is_i64() || n.is_u64(), "float {n}"),
            serde_json::Value::Array(a) => a.iter().for_each(no_floats),
            serde_json::Value::Object(m) => m.values().for_each(no_floats),
            _ => {}
        }
    }
    no_floats(&doc);
    let p13 = results
        .iter()
        .find(|r| r["prime"] == 13)
        .expect("row for 13");
    assert_eq!(p13["trace"], 638);
    assert_eq!(p13["k_term"], "2/1");
}

#[test]
fn eta_table_csv() {
    let out = run(
        &[
            "table", "eta", "--form", "eta3z8", "--n", "13", "--format", "csv",
        ],
        &[],
    );
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,coefficient"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows[0], "1,1");
    assert_eq!(rows[3], "4,-8");
    assert_eq!(rows[6], "7,20");
    assert_eq!(rows[12], "13,-70");
}

#[test]
fn verify_identities_passes() {
    let out = run(&["verify", "--suite", "identities", "--q", "13"], &[]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("identities q=13 result=PASS"), "got {text}");
    assert!(!text.contains("FAIL"));
}

#[test]
fn usage_errors_exit_one() {
    let out = run(
        &["trace", "--level", "3", "--weight", "4", "--prime", "9"],
        &[],
    );
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["verify", "--suite", "nonsense"], &[]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["--help"], &[]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn field_bound_exit_three() {
    let out = run(
        &["table", "hyp", "--prime", "13"],
        &[("HH_FIELD_BOUND", "10")],
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn out_file_round_trip() {
    let dir = std::env::temp_dir().join(format!("heckehyp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("census.json");
    let out = run(
        &[
            "table",
            "census",
            "--prime",
            "13",
            "--format",
            "json",
            "--out",
            path.to_str().unwrap(),
        ],
        &[],
    );
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let total: u64 = doc["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["N"].as_u64().unwrap())
        .sum();
    assert!(total > 0);
    std::fs::remove_dir_all(&dir).unwrap();
}
