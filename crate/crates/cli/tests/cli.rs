//! End-to-end tests of the binary: exact output bytes and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

/// Runs the binary with the fixtures directory as working directory, so
/// fixture files can be named bare.
fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_splitrev"))
        .args(args)
        .current_dir(fixtures())
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 stderr")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

/// Writes generated input under a unique temp name and returns the path as
/// a string argument.
fn temp_input(name: &str, contents: &str) -> String {
    let path = std::env::temp_dir().join(format!("splitrev-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).expect("temp file");
    path.to_str().expect("utf-8 path").to_string()
}

#[test]
fn models_text_output() {
    let out = run(&["models", "p & (q | r)"]);
    assert_eq!(stdout(&out), "vars: p q r\n101\n110\n111\n");
    assert_eq!(code(&out), 0);
}

#[test]
fn models_json_output() {
    let out = run(&["--json", "models", "p | q"]);
    assert_eq!(stdout(&out), "{\"models\":[\"01\",\"10\",\"11\"],\"vars\":[\"p\",\"q\"]}\n");
    assert_eq!(code(&out), 0);
}

#[test]
fn vars_flag_fixes_the_language() {
    let out = run(&["models", "--vars", "a p q", "p & q"]);
    assert_eq!(stdout(&out), "vars: a p q\n011\n111\n");
    assert_eq!(code(&out), 0);

    let out = run(&["factorize", "--vars", "p q", "p & r"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("r"));
}

#[test]
fn factorize_formula_and_file() {
    let out = run(&["factorize", "p & (q | r)"]);
    assert_eq!(stdout(&out), "[p] [q r]\n");
    assert_eq!(code(&out), 0);

    let out = run(&["factorize", "three.ms"]);
    assert_eq!(stdout(&out), "[p q]\n");
    assert_eq!(code(&out), 0);

    let out = run(&["--json", "factorize", "p & (q | r)"]);
    assert_eq!(stdout(&out), "{\"blocks\":[[\"p\"],[\"q\",\"r\"]]}\n");
    assert_eq!(code(&out), 0);
}

#[test]
fn check_partition_answers() {
    let out = run(&["check-partition", "p & (q | r)", "split.json"]);
    assert_eq!(stdout(&out), "yes\n");
    assert_eq!(code(&out), 0);

    let bad = temp_input("bad-split.json", "{\"blocks\":[[\"q\"],[\"p\",\"r\"]]}");
    let out = run(&["check-partition", "p & (q | r)", &bad]);
    assert_eq!(stdout(&out), "no\n");
    assert_eq!(code(&out), 1);

    let out = run(&["--json", "check-partition", "p & (q | r)", "split.json"]);
    assert_eq!(stdout(&out), "{\"factorizes\":true}\n");
    assert_eq!(code(&out), 0);
}

#[test]
fn revise_under_each_metric() {
    let out = run(&["revise", "p & q", "!p | !q"]);
    assert_eq!(stdout(&out), "vars: p q\n01\n10\n");
    assert_eq!(code(&out), 0);

    let out = run(&[
        "revise",
        "--metric",
        "weighted",
        "--weights",
        "weights.json",
        "p & q",
        "!p | !q",
    ]);
    assert_eq!(stdout(&out), "vars: p q\n10\n");
    assert_eq!(code(&out), 0);

    let out = run(&["revise", "--metric", "set", "p & q & r", "!p & !q | !r"]);
    assert_eq!(stdout(&out), "vars: p q r\n001\n110\n");
    assert_eq!(code(&out), 0);
}

#[test]
fn revise_componentwise_glues_blockwise_results() {
    let out = run(&[
        "revise",
        "--partition",
        "split.json",
        "(p & q) | (p & r)",
        "!p",
        "--vars",
        "p q r",
    ]);
    assert_eq!(stdout(&out), "vars: p q r\n001\n010\n011\n");
    assert_eq!(code(&out), 0);

    // The prior p <-> q is not factorized by {p},{q}: componentwise
    // revision must refuse rather than silently change semantics.
    let split = temp_input("pq-split.json", "{\"blocks\":[[\"p\"],[\"q\"]]}");
    let out = run(&["revise", "--partition", &split, "p <-> q", "p"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("factoriz"));
}

#[test]
fn revise_mixes_files_and_formulas() {
    let out = run(&["revise", "three.ms", "!p"]);
    assert_eq!(stdout(&out), "vars: p q\n00\n");
    assert_eq!(code(&out), 0);
}

#[test]
fn weights_belong_to_the_weighted_metric_only() {
    let out = run(&["revise", "--weights", "weights.json", "p & q", "!p"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("weight"));
}

#[test]
fn defaults_compile_golden() {
    let out = run(&["defaults", "compile", "penguin.txt"]);
    assert_eq!(
        stdout(&out),
        "{\"vars\":[\"bird\",\"fly\",\"pen\"],\"edges\":[\
         {\"from\":\"101\",\"to\":\"111\",\"defaults\":[\"d2\"]},\
         {\"from\":\"110\",\"to\":\"100\",\"defaults\":[\"d1\"]},\
         {\"from\":\"110\",\"to\":\"101\",\"defaults\":[\"d1\"]},\
         {\"from\":\"111\",\"to\":\"100\",\"defaults\":[\"d1\"]}]}\n"
    );
    assert_eq!(stderr(&out), "");
    assert_eq!(code(&out), 0);
}

#[test]
fn defaults_compile_reports_cycles_on_stderr() {
    let out = run(&["defaults", "compile", "contradictory.txt"]);
    assert_eq!(
        stdout(&out),
        "{\"vars\":[\"p\"],\"edges\":[\
         {\"from\":\"0\",\"to\":\"1\",\"defaults\":[\"d2\"]},\
         {\"from\":\"1\",\"to\":\"0\",\"defaults\":[\"d1\"]}]}\n"
    );
    assert_eq!(stderr(&out), "note: preference cycle among 0 1\n");
    assert_eq!(code(&out), 0);
}

#[test]
fn defaults_query_answers() {
    let out = run(&["defaults", "query", "penguin.txt", "bird & !pen", "fly"]);
    assert_eq!(stdout(&out), "yes\n");
    assert_eq!(code(&out), 0);

    let out = run(&["defaults", "query", "penguin.txt", "bird", "!fly"]);
    assert_eq!(stdout(&out), "no\n");
    assert_eq!(code(&out), 1);

    let out = run(&["--json", "defaults", "query", "penguin.txt", "bird", "fly"]);
    assert_eq!(stdout(&out), "{\"consequence\":true}\n");
    assert_eq!(code(&out), 0);
}

#[test]
fn defaults_extract_and_recompile() {
    let compiled = run(&["defaults", "compile", "penguin.txt"]);
    let graph = temp_input("penguin-graph.json", &stdout(&compiled));

    let extracted = run(&["defaults", "extract", &graph]);
    assert_eq!(code(&extracted), 0);
    let listing = stdout(&extracted);
    let lines: Vec<&str> = listing.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines.iter().all(|l| l.contains(" |~ ")));

    // Compiling the extracted rules reproduces the same edges (provenance
    // labels refer to each file's own rule numbering, so they differ).
    let rules = temp_input("penguin-extracted.txt", &stdout(&extracted));
    let recompiled = run(&["defaults", "compile", &rules]);
    let endpoints = |text: &str| -> Vec<(String, String)> {
        let value: serde_json::Value = serde_json::from_str(text).unwrap();
        value["edges"]
            .as_array()
            .unwrap()
            .iter()
            .map(|e| {
                (
                    e["from"].as_str().unwrap().to_string(),
                    e["to"].as_str().unwrap().to_string(),
                )
            })
            .collect()
    };
    assert_eq!(endpoints(&stdout(&compiled)), endpoints(&stdout(&recompiled)));
}

#[test]
fn recode_search_outputs() {
    let out = run(&["recode", "search", "--mode", "full", "diag.ms"]);
    assert_eq!(
        stdout(&out),
        "{\"permutation\":[0,1,3,2],\"target_vars\":[\"p'\",\"q'\"]}\n"
    );
    assert_eq!(code(&out), 0);

    let out = run(&["recode", "search", "--mode", "affine", "diag.ms"]);
    assert_eq!(
        stdout(&out),
        "{\"matrix\":[[0,1],[1,1]],\"offset\":[0,0],\"target_vars\":[\"p'\",\"q'\"]}\n"
    );
    assert_eq!(code(&out), 0);

    let out = run(&["--json", "recode", "search", "--mode", "full", "three.ms"]);
    assert_eq!(stdout(&out), "{\"found\":false}\n");
    assert_eq!(code(&out), 1);
}

#[test]
fn oracle_agrees_with_factorize() {
    let out = run(&["oracle", "finest", "p & (q | r)"]);
    assert_eq!(stdout(&out), "[p] [q r]\n");
    assert_eq!(code(&out), 0);
}

#[test]
fn error_exit_codes() {
    // Unparseable formula: input error.
    let out = run(&["factorize", "p &"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).starts_with("error:"));

    // Missing file named with a separator: input error.
    let out = run(&["factorize", "./no-such-file.ms"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("no-such-file.ms"));

    // Contradiction has no models to factorize: semantic error.
    let out = run(&["factorize", "p & !p"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("empty"));

    // Revising sets over different languages: semantic error.
    let other = temp_input("abc.ms", "vars: a b c\n000\n");
    let out = run(&["revise", "three.ms", &other]);
    assert_eq!(code(&out), 3);

    // Unknown flag: usage error from the argument parser.
    let out = run(&["factorize", "--frobnicate", "p"]);
    assert_eq!(code(&out), 2);

    // Search space limit: semantic error.
    let out = run(&["recode", "search", "--mode", "full", "a & b & c & d"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("4"));
}
