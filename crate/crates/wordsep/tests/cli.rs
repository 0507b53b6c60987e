//! End-to-end checks of the command-line binary: exit codes, JSON shapes,
//! and the documented worked examples.

use std::path::PathBuf;
use std::process::{Command, Output};

fn wordsep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wordsep"))
        .args(args)
        .output()
        .expect("spawn wordsep binary")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn jsonl(out: &[u8]) -> Vec<serde_json::Value> {
    String::from_utf8_lossy(out)
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).expect("JSON line"))
        .collect()
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("wordsep-cli-{}-{name}", std::process::id()));
    p
}

#[test]
fn classify_reports_hard_pair() {
    let out = wordsep(&["classify", "ab", "ba"]);
    assert_eq!(out.status.code(), Some(0));
    let j = stdout_json(&out);
    assert_eq!(j["class"], "hard");
    assert_eq!(j["reduction"]["x"], "ab");
    assert_eq!(j["reduction"]["y"], "ba");
}

#[test]
fn classify_reports_easy_witness() {
    let out = wordsep(&["classify", "a", "aa"]);
    assert_eq!(out.status.code(), Some(0));
    let j = stdout_json(&out);
    assert_eq!(j["class"], "easy");
    assert_eq!(j["witness"], "a");
}

#[test]
fn classify_projects_hard_pair_to_binary() {
    let out = wordsep(&["classify", "acb", "bca"]);
    assert_eq!(out.status.code(), Some(0));
    let j = stdout_json(&out);
    assert_eq!(j["class"], "hard");
    assert_eq!(j["reduction"]["x"], "ab");
    assert_eq!(j["reduction"]["y"], "ba");
}

#[test]
fn classify_identical_words_is_usage_error() {
    let out = wordsep(&["classify", "ab", "ab"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn separate_exact_pair_machine_has_two_states() {
    let out = wordsep(&["separate", "--model", "afa-exact", "ab", "ba"]);
    assert_eq!(out.status.code(), Some(0));
    let j = stdout_json(&out);
    assert_eq!(j["verified"], true);
    assert_eq!(j["exact"], true);
    assert_eq!(j["machine"]["states"], 2);
    assert_eq!(j["mode"], "exact");
}

#[test]
fn separate_bounded_two_state_bound_is_witnessed() {
    // The 2-state scaled machine's worst case over other words is
    // (k+1)/(2k+1); the word one step below x attains it exactly.
    let out = wordsep(&["separate", "--model", "afa-bounded", "--k", "100", "0", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let j = stdout_json(&out);
    assert_eq!(j["verified"], true);
    assert_eq!(j["mode"], "bounded(101/201)");
    let reject = &j["words"][1];
    assert_eq!(reject["word"], "b");
    assert_eq!(reject["value"], "101/201");
}

#[test]
fn separate_three_state_reaches_small_bound() {
    let out = wordsep(&["separate", "--model", "afa-3state", "--k", "100", "0", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let j = stdout_json(&out);
    assert_eq!(j["verified"], true);
    assert_eq!(j["mode"], "bounded(2/201)");
    assert_eq!(j["machine"]["states"], 3);
}

#[test]
fn separate_nondet_tensor_agrees_with_exact_oracle() {
    let out = wordsep(&[
        "separate", "--model", "nondet", "--set-x", "a,b", "--set-y", "ab,ba",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let j = stdout_json(&out);
    assert_eq!(j["verified"], true);
    assert_eq!(j["machine"]["states"], 4); // 2^{|X|}
    assert_eq!(j["machine"]["backend"], "complex");
    assert_eq!(j["oracle"]["verified"], true);
    assert_eq!(j["oracle"]["machine"]["states"], 9); // 3 per word
    assert_eq!(j["oracle"]["exact"], true);
}

#[test]
fn separate_rotation_counts_easy_witness() {
    let out = wordsep(&["separate", "--model", "mcqfa-rotation", "a", "aa"]);
    assert_eq!(out.status.code(), Some(0));
    let j = stdout_json(&out);
    assert_eq!(j["verified"], true);
}

#[test]
fn separate_rotation_rejects_hard_pair() {
    let out = wordsep(&["separate", "--model", "mcqfa-rotation", "ab", "ba"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn separate_swap_machine_accepts_ba_side() {
    let out = wordsep(&["separate", "--model", "mcqfa-swap", "ba", "ab"]);
    assert_eq!(out.status.code(), Some(0));
    let j = stdout_json(&out);
    assert_eq!(j["verified"], true);
}

#[test]
fn separate_swap_machine_flags_wrong_orientation() {
    let out = wordsep(&["separate", "--model", "mcqfa-swap", "ab", "ba"]);
    assert_eq!(out.status.code(), Some(3));
    let j = stdout_json(&out);
    assert_eq!(j["verified"], false);
}

#[test]
fn separate_dumps_machine_json() {
    let dump = tmp("dump.json");
    let report = tmp("report.json");
    let out = wordsep(&[
        "separate",
        "--model",
        "afa-exact",
        "ab",
        "ba",
        "--dump-machine",
        dump.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let machine: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&dump).unwrap()).unwrap();
    assert_eq!(machine["schema"], 1);
    assert_eq!(machine["model"], "afa");
    assert_eq!(machine["states"], 2);
    assert!(machine["end_marker"].is_array());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(report["verified"], true);
    let _ = std::fs::remove_file(&dump);
    let _ = std::fs::remove_file(tmp("report.json"));
}

#[test]
fn separate_csv_lists_one_row_per_word() {
    let out = wordsep(&["separate", "--model", "afa-exact", "ab", "ba", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "word,side,value,approx,ok");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("ab,accept,1,"));
    assert!(lines[2].starts_with("ba,reject,0,"));
}

#[test]
fn separate_without_words_is_usage_error() {
    let out = wordsep(&["separate", "--model", "afa-exact"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_model_is_usage_error() {
    let out = wordsep(&["separate", "--model", "bogus", "a", "b"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_exact_pairs_has_no_violations() {
    let path = tmp("sweep-exact.jsonl");
    let out = wordsep(&[
        "sweep",
        "--model",
        "afa-exact",
        "--max-len",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let summary = stdout_json(&out);
    assert_eq!(summary["violations"], 0);
    // 15 binary words of length ≤ 3, all ordered distinct pairs.
    assert_eq!(summary["swept"], 15 * 14);
    let records = jsonl(&std::fs::read_to_string(&path).unwrap().into_bytes());
    assert_eq!(records.len(), 15 * 14);
    assert!(records.iter().all(|r| r["verified"] == true));
    let _ = std::fs::remove_file(&path);
}

#[test]
fn sweep_derived_series_matches_classification() {
    let out = wordsep(&["sweep", "--model", "derived-series", "--max-len", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let records = jsonl(&out.stdout);
    // 31 binary words of length ≤ 4, unordered distinct pairs.
    assert_eq!(records.len(), 31 * 30 / 2);
    assert!(records.iter().all(|r| r["verified"] == true));
}

#[test]
fn sweep_rejects_oversized_bound() {
    let out = wordsep(&["sweep", "--model", "afa-exact", "--max-len", "9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn wordmap_single_pair_reaches_quarter_turn() {
    let out = wordsep(&["wordmap", "ab", "ba", "--restarts", "16", "--iterations", "40"]);
    assert_eq!(out.status.code(), Some(0));
    let records = jsonl(&out.stdout);
    assert_eq!(records.len(), 1);
    let r = &records[0];
    assert_eq!(r["omega"], "a b A B");
    assert!(r["alpha_hat"].as_f64().unwrap() >= std::f64::consts::FRAC_PI_2 - 1e-3);
    assert_eq!(r["quarter_turn_reached"], true);
    assert!(r["residual"].as_f64().unwrap() <= 1e-6);
}

#[test]
fn wordmap_sweep_emits_one_record_per_hard_pair() {
    let out = wordsep(&[
        "wordmap",
        "--max-len",
        "3",
        "--restarts",
        "4",
        "--iterations",
        "25",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let records = jsonl(&out.stdout);
    // Hard pairs with both lengths ≤ 3: (ab,ba) and the six length-3 pairs.
    assert_eq!(records.len(), 7);
    assert!(records.iter().any(|r| r["x"] == "ab" && r["y"] == "ba"));
}

#[test]
fn dfa_min_finds_two_state_separators() {
    let out = wordsep(&["dfa-min", "ab", "ba"]);
    assert_eq!(out.status.code(), Some(0));
    let j = stdout_json(&out);
    assert_eq!(j["size"], 2);

    let out = wordsep(&["dfa-min", "a", "aa"]);
    assert_eq!(out.status.code(), Some(0));
    let j = stdout_json(&out);
    assert_eq!(j["size"], 2);
}

#[test]
fn dfa_min_identical_words_is_usage_error() {
    let out = wordsep(&["dfa-min", "ab", "ab"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_exits_zero() {
    let out = wordsep(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}
