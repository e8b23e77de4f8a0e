use fullerene46::generators::{generate, serialize_graph, GraphKind};
use fullerene46::verify::{run_corpus, verify_graph, CorpusManifest, GraphSource, OracleMode, Verdict, VerifyOptions};

#[test]
fn default_corpus_passes() {
    let report = run_corpus(&CorpusManifest::default_corpus(), 0);
    assert_eq!(report.entries.len(), 8);
    for e in &report.entries {
        assert_eq!(e.verdict, Verdict::Pass, "{}: {:?}", e.graph, e.errors);
        assert!(e.counts.oracle.is_some(), "{} has m <= 48", e.graph);
        assert_eq!(e.residuals.len(), 10);
    }
    let t1 = &report.entries[2];
    assert_eq!(t1.graph, "tube:1");
    assert_eq!(t1.item("M6").unwrap().formula, Some(367));
    assert_eq!(t1.item("Q").unwrap().brute, 2298);
}

#[test]
fn json_is_deterministic() {
    let manifest = CorpusManifest::default_corpus();
    let a = run_corpus(&manifest, 1).to_json(false);
    let b = run_corpus(&manifest, 3).to_json(false);
    assert_eq!(a, b);
    assert!(!a.contains("volatile"));
    assert!(run_corpus(&manifest, 2).to_json(true).contains("\"volatile\""));
}

#[test]
fn bad_entry_is_isolated() {
    let dir = std::env::temp_dir().join(format!("fullerene46-verify-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("bad.bnf"), "bnf-graph 1\nn 8\n0: 1 2 3\nnonsense\n").unwrap();
    std::fs::write(dir.join("prism.bnf"), serialize_graph(&generate(GraphKind::HexagonalPrism))).unwrap();
    let text = r#"{"entries": [{"generate": "cube"}, {"file": "bad.bnf"}, {"file": "prism.bnf"}]}"#;
    let manifest = CorpusManifest::from_json(text, Some(&dir)).unwrap();
    let report = run_corpus(&manifest, 2);
    let verdicts: Vec<_> = report.entries.iter().map(|e| e.verdict).collect();
    assert_eq!(verdicts, [Verdict::Pass, Verdict::Fail, Verdict::Pass]);
    assert!(report.entries[1].errors[0].contains("syntax error at line 4"), "{:?}", report.entries[1].errors);
    assert_eq!(report.verdict(), Verdict::Fail);
    assert_eq!(report.summary().failed, 1);

    // The prism read from disk reports the same counts as the generated one.
    let generated = verify_graph(&generate(GraphKind::HexagonalPrism), GraphSource::Generate(GraphKind::HexagonalPrism), &manifest.options);
    assert_eq!(report.entries[2].counts, generated.counts);
    assert_eq!(report.entries[2].digest, generated.digest);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn oracle_auto_skips_large_graphs() {
    let kind = GraphKind::Tube(5);
    let g = generate(kind);
    assert!(g.edge_count() > 48);
    let r = verify_graph(&g, GraphSource::Generate(kind), &VerifyOptions::default());
    assert_eq!(r.verdict, Verdict::Pass);
    assert!(r.counts.oracle.is_none());
    assert!(r.items.iter().all(|i| i.oracle.is_none()));

    let off = VerifyOptions { oracle: OracleMode::Off, ..VerifyOptions::default() };
    let cube = verify_graph(&generate(GraphKind::Cube), GraphSource::Generate(GraphKind::Cube), &off);
    assert!(cube.counts.oracle.is_none());
}

#[test]
fn legacy_fails_every_graph_with_hexagons() {
    let mut manifest = CorpusManifest::default_corpus();
    manifest.options.legacy_formulas = true;
    manifest.options.oracle = OracleMode::Off;
    for e in run_corpus(&manifest, 0).entries {
        let p = e.item("P").unwrap();
        assert!(!p.matches, "{}", e.graph);
        assert_eq!(e.verdict, Verdict::Fail);
    }
}

#[test]
fn csv_has_one_row_per_item() {
    let manifest = CorpusManifest { entries: vec![GraphSource::Generate(GraphKind::Cube)], options: VerifyOptions::default() };
    let csv = run_corpus(&manifest, 1).to_csv();
    let counts = csv.lines().filter(|l| l.starts_with("cube,count,")).count();
    assert_eq!(counts, 6 + 17);
    assert!(csv.contains("cube,count,Q,96,96,96,ok"));
    assert!(csv.contains("cube,count,W,"));
}
