//! End-to-end tests of the binary: exit codes, determinism, and the file
//! round trip, exercised exactly as a shell user would.

use std::path::PathBuf;
use std::process::{Command, Output};

fn kperp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kperp"))
        .args(args)
        .env_remove("KPERP_JOBS")
        .output()
        .expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn stdout_str(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8")
}

/// Certificate file body with the (timestamped) header line stripped.
fn body_after_header(path: &PathBuf) -> String {
    let text = std::fs::read_to_string(path).expect("readable");
    let mut lines = text.lines();
    let header = lines.next().expect("header line");
    assert!(header.contains("\"format_version\":1"));
    lines.collect::<Vec<_>>().join("\n")
}

#[test]
fn scan_is_deterministic_across_worker_counts() {
    let f1 = tmp("scan_jobs1.jsonl");
    let f2 = tmp("scan_jobs2.jsonl");
    let o1 = kperp(&["scan", "--min", "100", "--max", "140", "--jobs", "1", "--out",
        f1.to_str().unwrap()]);
    assert!(o1.status.success());
    let o2 = kperp(&["scan", "--min", "100", "--max", "140", "--jobs", "2", "--out",
        f2.to_str().unwrap()]);
    assert!(o2.status.success());
    let b1 = body_after_header(&f1);
    let b2 = body_after_header(&f2);
    assert!(!b1.is_empty());
    assert_eq!(b1, b2);
}

#[test]
fn jobs_env_variable_is_honored() {
    let f1 = tmp("scan_env_default.jsonl");
    let f2 = tmp("scan_env_two.jsonl");
    let o1 = kperp(&["scan", "--min", "118", "--max", "122", "--out", f1.to_str().unwrap()]);
    assert!(o1.status.success());
    let o2 = Command::new(env!("CARGO_BIN_EXE_kperp"))
        .args(["scan", "--min", "118", "--max", "122", "--out", f2.to_str().unwrap()])
        .env("KPERP_JOBS", "2")
        .output()
        .expect("binary runs");
    assert!(o2.status.success());
    assert_eq!(body_after_header(&f1), body_after_header(&f2));
}

#[test]
fn search_prints_none_for_an_exceptional_target() {
    // d = 88 (m = 11) has no certificate with N in {1, 3, 5}
    let o = kperp(&["search", "88", "--target-n", "1,3,5"]);
    assert!(o.status.success());
    assert_eq!(stdout_str(&o).trim(), "none");
}

#[test]
fn search_emits_a_parseable_record() {
    let o = kperp(&["search", "808"]);
    assert!(o.status.success());
    let rec: serde_json::Value = serde_json::from_str(stdout_str(&o).trim()).expect("json");
    assert_eq!(rec["d"], 808);
    let n = rec["n"].as_u64().unwrap();
    assert_eq!(n % 2, 1);
}

#[test]
fn verify_passes_a_fresh_scan_and_fails_a_tampered_one() {
    let good = tmp("verify_good.jsonl");
    let o = kperp(&["scan", "--min", "120", "--max", "120", "--out", good.to_str().unwrap()]);
    assert!(o.status.success());

    let o = kperp(&["verify", good.to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout_str(&o);
    assert!(text.contains("PASS"));
    assert!(text.contains(" 0 failures"));

    // bump one stored count by 2: parity still holds, the recount does not
    let raw = std::fs::read_to_string(&good).unwrap();
    let mut lines: Vec<String> = raw.lines().map(String::from).collect();
    assert!(lines.len() >= 2);
    let mut rec: serde_json::Value = serde_json::from_str(&lines[1]).unwrap();
    let n = rec["n"].as_u64().unwrap();
    rec["n"] = serde_json::Value::from(n + 2);
    lines[1] = serde_json::to_string(&rec).unwrap();
    let bad = tmp("verify_bad.jsonl");
    std::fs::write(&bad, lines.join("\n")).unwrap();

    let o = kperp(&["verify", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout_str(&o);
    assert!(text.contains("FAIL [e]"), "got:\n{}", text);
}

#[test]
fn table_text_and_json_agree_on_the_open_cases() {
    let o = kperp(&["table", "--max", "176"]);
    assert!(o.status.success());
    let text = stdout_str(&o);
    assert!(text.contains("unknown"));
    assert!(text.contains("176"));

    let o = kperp(&["table", "--max", "176", "--json"]);
    assert!(o.status.success());
    let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout_str(&o)).expect("json");
    assert!(!rows.is_empty());
    let unknown = rows.iter().filter(|r| r["verdict"] == "unknown").count();
    assert_eq!(unknown, 34);
    let last = rows.last().unwrap();
    assert_eq!(last["d"], 176);
    assert_eq!(last["verdict"], "unknown");
}

#[test]
fn bounds_prints_the_three_constants() {
    let o = kperp(&["bounds"]);
    assert!(o.status.success());
    let text = stdout_str(&o);
    for needle in ["2055", "3238", "10463"] {
        assert!(text.contains(needle), "missing {} in:\n{}", needle, text);
    }
}

#[test]
fn triples_finds_witnesses_and_reports_exceptions() {
    // 27 admits no distinct coprime triple
    let o = kperp(&["triples", "27", "--distinct", "--coprime"]);
    assert!(o.status.success());
    assert_eq!(stdout_str(&o).trim(), "none");

    // 171 = 1 + 49 + 121 with all parts odd
    let o = kperp(&["triples", "171", "--odd", "--distinct", "--coprime"]);
    assert!(o.status.success());
    let parts: Vec<i64> = stdout_str(&o)
        .split_whitespace()
        .map(|w| w.parse().unwrap())
        .collect();
    assert_eq!(parts.len(), 3);
    assert_eq!(parts.iter().map(|x| x * x).sum::<i64>(), 171);
    assert!(parts.iter().all(|x| x % 2 == 1));
}

#[test]
fn usage_and_domain_errors_exit_two() {
    assert_eq!(kperp(&["frobnicate"]).status.code(), Some(2));
    // 7 is not 0, 2, 4 mod 8
    assert_eq!(kperp(&["search", "7"]).status.code(), Some(2));
    assert_eq!(
        kperp(&["scan", "--min", "5", "--max", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        kperp(&["verify", "/nonexistent/certs.jsonl"]).status.code(),
        Some(2)
    );
    let mangled = tmp("mangled.jsonl");
    std::fs::write(&mangled, "not json at all\n").unwrap();
    assert_eq!(kperp(&["verify", mangled.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn help_exits_zero() {
    let o = kperp(&["--help"]);
    assert!(o.status.success());
    assert!(stdout_str(&o).contains("scan"));
}
