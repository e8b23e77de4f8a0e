use assert_cmd::Command;
use predicates::prelude::*;

fn bnf() -> Command {
    Command::cargo_bin("bnf").unwrap()
}

#[test]
fn count_cube_q() {
    bnf().args(["count", "--generate", "cube", "--pattern", "Q"]).assert().success().stdout("96\n");
}

#[test]
fn count_matchings() {
    bnf().args(["count", "--generate", "tube:1", "--k", "6"]).assert().success().stdout("367\n");
    bnf().args(["count", "--generate", "prism", "--k", "6"]).assert().success().stdout("20\n");
}

#[test]
fn unknown_pattern_is_usage_error() {
    bnf()
        .args(["count", "--generate", "cube", "--pattern", "X"])
        .assert()
        .code(2)
        .stdout("")
        .stderr(predicate::str::contains("unknown pattern X"));
}

#[test]
fn count_needs_exactly_one_target() {
    bnf().args(["count", "--generate", "cube"]).assert().code(2);
    bnf().args(["count", "--generate", "cube", "--k", "2", "--pattern", "Q"]).assert().code(2);
}

#[test]
fn single_graph_source_required() {
    bnf().args(["classify"]).assert().code(2);
    bnf().args(["classify", "--generate", "cube", "--input", "x.bnf"]).assert().code(2);
    bnf().args(["classify", "--generate", "dodecahedron"]).assert().code(2);
}

#[test]
fn classify_tube() {
    bnf()
        .args(["classify", "--generate", "tube:2"])
        .assert()
        .success()
        .stdout(predicate::str::starts_with("Tubular t=2 h=6 y=6\n"))
        .stdout(predicate::str::contains("six-cycles=15"));
}

#[test]
fn classify_lantern_json() {
    let out = bnf().args(["classify", "--generate", "lantern-a", "--format", "json"]).output().unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let profile = &doc["class"]["profile"];
    let tuple: Vec<u64> = ["x0", "x1", "x2", "y"].iter().map(|k| profile[k].as_u64().unwrap()).collect();
    assert_eq!(tuple, [0, 4, 2, 4]);
    assert_eq!(doc["class"]["kind"]["kind"], "lantern");
}

#[test]
fn tube_cap() {
    bnf().args(["generate", "--generate", "tube:41"]).assert().code(2).stderr(predicate::str::contains("--allow-large"));
    bnf().args(["generate", "--generate", "tube:41", "--allow-large"]).assert().success();
}

#[test]
fn generate_then_read_back() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lantern.bnf");
    bnf()
        .args(["generate", "--generate", "lantern-b", "--out"])
        .arg(&path)
        .assert()
        .success()
        .stdout("");
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("bnf-graph 1\nn 20\n"));
    bnf()
        .args(["classify", "--input"])
        .arg(&path)
        .assert()
        .success()
        .stdout(predicate::str::starts_with("Lantern h=6 y=4\n"));
}

#[test]
fn malformed_input_is_graph_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.bnf");
    std::fs::write(&path, "bnf-graph 1\nn 4\n0: 1 2\n").unwrap();
    bnf().args(["classify", "--input"]).arg(&path).assert().code(1).stderr(predicate::str::contains("line 4"));
    bnf().args(["count", "--k", "1", "--input"]).arg(dir.path().join("missing.bnf")).assert().code(1);
}

#[test]
fn verify_default_corpus_json() {
    let out = bnf().args(["verify", "--corpus", "default", "--format", "json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["verdict"], "PASS");
    let entries = doc["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 8);
    for e in entries {
        for key in ["graph", "class", "h", "y", "counts", "residuals", "verdict"] {
            assert!(e.get(key).is_some(), "missing {key}");
        }
        assert!(e["counts"]["brute"].is_object() && e["counts"]["formula"].is_object());
    }
    assert_eq!(entries[2]["counts"]["brute"]["Q"], 2298);
    assert!(doc["volatile"]["timings"].is_object());
}

#[test]
fn verify_legacy_fails() {
    bnf()
        .args(["verify", "--generate", "tube:2", "--legacy-formulas"])
        .assert()
        .code(1)
        .stdout(predicate::str::contains("mismatch P"));
}

#[test]
fn verify_manifest_isolates_bad_file() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.bnf"), "bnf-graph 1\nn 8\n0: 1 2\n").unwrap();
    std::fs::write(dir.path().join("cube.bnf"), fullerene46::generators::serialize_graph(&fullerene46::generate(fullerene46::GraphKind::Cube))).unwrap();
    let manifest = dir.path().join("corpus.json");
    std::fs::write(
        &manifest,
        r#"{"entries": [{"file": "cube.bnf"}, {"file": "bad.bnf"}, {"generate": "prism"}], "options": {"oracle": "off"}}"#,
    )
    .unwrap();
    let out = bnf().args(["verify", "--format", "csv", "--corpus"]).arg(&manifest).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.lines().any(|l| l.contains("bad.bnf,error")));
    assert!(!csv.lines().any(|l| l.contains("MISMATCH")));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("1 of 3"), "{stderr}");
}

#[test]
fn verify_threads_env() {
    let run = |threads: &str| {
        let out = bnf()
            .env("BNF_THREADS", threads)
            .args(["verify", "--corpus", "default", "--no-oracle", "--format", "csv"])
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run("1"), run("3"));
    bnf().env("BNF_THREADS", "-1").args(["verify", "--generate", "cube"]).assert().code(2);
}

#[test]
fn bad_manifest_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("m.json");
    std::fs::write(&manifest, r#"{"entries": [{"generate": "cube"}, {"generate": "cube"}]}"#).unwrap();
    bnf().args(["verify", "--corpus"]).arg(&manifest).assert().code(2).stderr(predicate::str::contains("duplicate"));
}
