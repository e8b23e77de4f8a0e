//! Full verification of single graphs and whole corpora.
//!
//! A report keeps every number it compared (targeted count, oracle count,
//! closed form) so a failure can be audited from the report alone. Timings
//! live apart from the comparable part of the report.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::census::{brute_force_counts, count_matchings, count_pattern, CountLedger, Pattern, PATTERN_NAMES};
use crate::formulas::{self, FormulaError, FormulaInput};
use crate::generators::{default_corpus, generate, parse_graph, serialize_graph, GraphKind};
use crate::plane_graph::{validate_fullerene, EmbeddedGraph};
use crate::structure::{classify_structure, enumerate_six_cycles, predicted_six_cycles, six_cycle_census, StructureKind};

/// Above this edge count the subset oracle is skipped unless forced on.
pub const ORACLE_AUTO_MAX_EDGES: usize = 48;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMode {
    #[default]
    Auto,
    On,
    Off,
}

impl OracleMode {
    fn enabled(self, m: usize) -> bool {
        match self {
            OracleMode::Auto => m <= ORACLE_AUTO_MAX_EDGES,
            OracleMode::On => true,
            OracleMode::Off => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyOptions {
    pub oracle: OracleMode,
    /// Compare against superseded formulas instead of the corrected ones.
    pub legacy_formulas: bool,
    /// Matching orders to count.
    pub matchings: Vec<usize>,
    /// Catalogued pattern names to count.
    pub patterns: Vec<String>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            oracle: OracleMode::Auto,
            legacy_formulas: false,
            matchings: (1..=6).collect(),
            patterns: PATTERN_NAMES.iter().map(|s| s.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphSource {
    Generate(GraphKind),
    File(PathBuf),
}

impl fmt::Display for GraphSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSource::Generate(kind) => write!(f, "{kind}"),
            GraphSource::File(path) => write!(f, "{}", path.display()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileSummary {
    pub x0: usize,
    pub x1: usize,
    pub x2: usize,
    pub x_more: usize,
    pub longest_chain: usize,
    pub cap_centres: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SixCycleReport {
    pub enumerated: usize,
    pub predicted: usize,
    pub hex_face: usize,
    pub dual_square: usize,
    pub square_cap: usize,
    pub capped_tube: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    /// Targeted enumerator.
    pub brute: BTreeMap<String, u64>,
    /// Subset oracle, when it ran.
    pub oracle: Option<BTreeMap<String, u64>>,
    /// Closed forms; `null` where none applies.
    pub formula: BTreeMap<String, Option<u64>>,
}

/// One compared quantity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ItemCheck {
    pub item: String,
    pub brute: u64,
    pub oracle: Option<u64>,
    pub formula: Option<u64>,
    /// Why no formula value is available, if so.
    pub note: Option<String>,
    pub matches: bool,
}

/// A structural or consistency check that is not a plain count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct PhaseTimings {
    pub validate_ms: f64,
    pub classify_ms: f64,
    pub six_cycles_ms: f64,
    pub census_ms: f64,
    pub oracle_ms: f64,
    pub formulas_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphReport {
    pub graph: String,
    pub source: GraphSource,
    /// SHA-256 of the graph's `bnf-graph` serialisation.
    pub digest: Option<String>,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub h: Option<usize>,
    pub y: Option<usize>,
    pub class: Option<StructureKind>,
    pub profile: Option<ProfileSummary>,
    pub six_cycles: Option<SixCycleReport>,
    pub counts: Counts,
    pub items: Vec<ItemCheck>,
    pub checks: Vec<Check>,
    pub residuals: BTreeMap<String, i128>,
    pub legacy_formulas: bool,
    pub errors: Vec<String>,
    pub verdict: Verdict,
    #[serde(skip)]
    pub timings: PhaseTimings,
}

impl GraphReport {
    fn new(source: GraphSource, options: &VerifyOptions) -> Self {
        GraphReport {
            graph: source.to_string(),
            source,
            digest: None,
            n: None,
            m: None,
            h: None,
            y: None,
            class: None,
            profile: None,
            six_cycles: None,
            counts: Counts::default(),
            items: Vec::new(),
            checks: Vec::new(),
            residuals: BTreeMap::new(),
            legacy_formulas: options.legacy_formulas,
            errors: Vec::new(),
            verdict: Verdict::Fail,
            timings: PhaseTimings::default(),
        }
    }

    fn failed(source: GraphSource, options: &VerifyOptions, error: String) -> Self {
        let mut report = GraphReport::new(source, options);
        report.errors.push(error);
        report
    }

    fn settle(&mut self) {
        let ok = self.errors.is_empty()
            && self.items.iter().all(|i| i.matches)
            && self.checks.iter().all(|c| c.passed)
            && self.residuals.values().all(|&r| r == 0);
        self.verdict = if ok { Verdict::Pass } else { Verdict::Fail };
    }

    pub fn item(&self, name: &str) -> Option<&ItemCheck> {
        self.items.iter().find(|i| i.item == name)
    }
}

fn ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

pub fn digest(g: &EmbeddedGraph) -> String {
    format!("{:x}", Sha256::digest(serialize_graph(g).as_bytes()))
}

/// Runs every check on one graph. Errors end up in the report, never as a panic.
pub fn verify_graph(g: &EmbeddedGraph, source: GraphSource, options: &VerifyOptions) -> GraphReport {
    let mut report = GraphReport::new(source, options);
    report.digest = Some(digest(g));
    report.n = Some(g.vertex_count());
    report.m = Some(g.edge_count());
    if let Err(e) = run_pipeline(g, options, &mut report) {
        report.errors.push(e);
    }
    report.settle();
    report
}

fn run_pipeline(g: &EmbeddedGraph, options: &VerifyOptions, report: &mut GraphReport) -> Result<(), String> {
    let clock = Instant::now();
    let profile = validate_fullerene(g).map_err(|e| e.to_string())?;
    report.h = Some(profile.h);
    report.timings.validate_ms = ms(clock);

    let clock = Instant::now();
    let class = classify_structure(g).map_err(|e| e.to_string())?;
    report.class = Some(class.kind);
    report.y = Some(class.y());
    report.profile = Some(ProfileSummary {
        x0: class.profile.x0,
        x1: class.profile.x1,
        x2: class.profile.x2,
        x_more: class.profile.x_more,
        longest_chain: class.profile.longest_chain(),
        cap_centres: class.cap_centres.len(),
    });
    report.timings.classify_ms = ms(clock);

    let clock = Instant::now();
    let census = six_cycle_census(g).map_err(|e| e.to_string())?;
    let enumerated = enumerate_six_cycles(g).len();
    let predicted = predicted_six_cycles(&class);
    report.six_cycles = Some(SixCycleReport {
        enumerated,
        predicted,
        hex_face: census.hex_face,
        dual_square: census.dual_square,
        square_cap: census.square_cap,
        capped_tube: census.capped_tube,
    });
    report.checks.push(Check {
        name: "six_cycle_total".into(),
        passed: enumerated == predicted && census.total() == enumerated,
        detail: format!("enumerated {enumerated}, predicted {predicted}"),
    });
    let (h, y) = (profile.h, class.y());
    let expected_kinds = match class.kind {
        StructureKind::Cube => (0, 12, 4, 0),
        StructureKind::Tubular { t } => (3 * t, 6, 2, t - 1),
        _ => (h, y, 0, 0),
    };
    let found_kinds = (census.hex_face, census.dual_square, census.square_cap, census.capped_tube);
    report.checks.push(Check {
        name: "six_cycle_kinds".into(),
        passed: found_kinds == expected_kinds,
        detail: format!("hex/dual/cap/tube found {found_kinds:?}, expected {expected_kinds:?}"),
    });
    report.timings.six_cycles_ms = ms(clock);

    let clock = Instant::now();
    let mut patterns = Vec::new();
    for name in &options.patterns {
        patterns.push(Pattern::by_name(name).ok_or_else(|| format!("unknown pattern {name}"))?);
    }
    let mut ledger = CountLedger::default();
    for &k in &options.matchings {
        ledger.matchings.insert(k, count_matchings(g, k));
    }
    for p in &patterns {
        ledger.patterns.insert(p.name.clone(), count_pattern(g, p).map_err(|e| e.to_string())?);
    }
    report.timings.census_ms = ms(clock);

    let clock = Instant::now();
    let oracle = options.oracle.enabled(g.edge_count()).then(|| {
        let mut all: Vec<Pattern> = options.matchings.iter().filter(|k| (1..=6).contains(*k)).map(|&k| Pattern::matching(k)).collect();
        all.extend(patterns.iter().cloned());
        brute_force_counts(g, &all)
    });
    report.timings.oracle_ms = ms(clock);

    let clock = Instant::now();
    let input = FormulaInput::from_structure(&class).map_err(|e| e.to_string())?;
    let mut predictions = formulas::predict_all(&input);
    if options.legacy_formulas {
        predictions.insert("P".into(), formulas::legacy::path5_count(input.h));
    }

    let brute_items = ledger
        .matchings
        .iter()
        .map(|(k, &c)| (format!("M{k}"), c))
        .chain(ledger.patterns.iter().map(|(n, &c)| (n.clone(), c)));
    for (item, brute) in brute_items {
        let oracle_value = oracle.as_ref().and_then(|o| o.get(&item).copied());
        let (formula, note) = match predictions.get(&item) {
            Some(Ok(v)) => (Some(*v), None),
            Some(Err(e)) => (None, Some(e.to_string())),
            None => (None, Some("no formula for this order".into())),
        };
        let closed_form_missing = matches!(predictions.get(&item), Some(Err(FormulaError::NoClosedForm(_))));
        let formula_ok = match formula {
            Some(v) => v == brute,
            None => closed_form_missing || !predictions.contains_key(&item),
        };
        let oracle_ok = oracle_value.map_or(oracle.is_none(), |v| v == brute);
        report.counts.brute.insert(item.clone(), brute);
        report.counts.formula.insert(item.clone(), formula);
        report.items.push(ItemCheck { item, brute, oracle: oracle_value, formula, note, matches: formula_ok && oracle_ok });
    }
    report.counts.oracle = oracle;

    if let Some(q) = ledger.pattern("Q") {
        if let Some(m6) = ledger.matching(6) {
            let via_q = formulas::matching6_from_q(input.h, q);
            report.checks.push(Check {
                name: "m6_via_q".into(),
                passed: via_q.as_ref().is_ok_and(|&v| v == m6),
                detail: format!("{via_q:?} vs {m6}"),
            });
        }
        for name in ["U", "S", "R"] {
            if let Some(brute) = ledger.pattern(name) {
                let via_q = formulas::pattern_from_q(name, input.h, q);
                report.checks.push(Check {
                    name: format!("{name}_via_q"),
                    passed: via_q.as_ref().is_ok_and(|&v| v == brute),
                    detail: format!("{via_q:?} vs {brute}"),
                });
            }
        }
    }
    let mut sequence = vec![1u64];
    sequence.extend((1..=6).map_while(|k| ledger.matching(k)));
    if sequence.len() == 7 {
        let concave = (2..=5).all(|k| {
            let (a, b, c) = (sequence[k - 1] as u128, sequence[k] as u128, sequence[k + 1] as u128);
            b * b >= a * c
        });
        report.checks.push(Check {
            name: "log_concave".into(),
            passed: concave,
            detail: format!("M(G,0..6) = {sequence:?}"),
        });
    }

    let complete = (2..=6).all(|k| ledger.matching(k).is_some())
        && PATTERN_NAMES.iter().filter(|&&n| n != "W").all(|n| ledger.pattern(n).is_some());
    if complete {
        let residuals = formulas::recurrence_residuals(&ledger, input.m).map_err(|e| e.to_string())?;
        report.residuals = residuals.entries.into_iter().collect();
    }
    report.timings.formulas_ms = ms(clock);
    Ok(())
}

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("cannot read manifest {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed manifest: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("duplicate manifest entry {0}")]
    DuplicateEntry(String),
    #[error("unknown pattern {0} in manifest options")]
    UnknownPattern(String),
    #[error("matching order {0} is outside 1..=6")]
    BadMatchingOrder(usize),
}

/// Graphs to verify, plus the options applied to each.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub entries: Vec<GraphSource>,
    #[serde(default)]
    pub options: VerifyOptions,
}

impl CorpusManifest {
    pub fn default_corpus() -> Self {
        CorpusManifest {
            entries: default_corpus().into_iter().map(GraphSource::Generate).collect(),
            options: VerifyOptions::default(),
        }
    }

    /// Parses a JSON manifest. Relative file entries resolve against `base`.
    pub fn from_json(text: &str, base: Option<&Path>) -> Result<Self, ManifestError> {
        let mut manifest: CorpusManifest = serde_json::from_str(text)?;
        if let Some(base) = base {
            for entry in &mut manifest.entries {
                if let GraphSource::File(path) = entry {
                    if path.is_relative() {
                        *path = base.join(&*path);
                    }
                }
            }
        }
        manifest.validate()?;
        Ok(manifest)
    }

    pub fn load(path: &Path) -> Result<Self, ManifestError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ManifestError::Io { path: path.to_path_buf(), source })?;
        CorpusManifest::from_json(&text, path.parent())
    }

    pub fn validate(&self) -> Result<(), ManifestError> {
        for (i, entry) in self.entries.iter().enumerate() {
            if self.entries[..i].contains(entry) {
                return Err(ManifestError::DuplicateEntry(entry.to_string()));
            }
        }
        if let Some(bad) = self.options.patterns.iter().find(|p| Pattern::by_name(p).is_none()) {
            return Err(ManifestError::UnknownPattern(bad.clone()));
        }
        if let Some(&k) = self.options.matchings.iter().find(|&&k| !(1..=6).contains(&k)) {
            return Err(ManifestError::BadMatchingOrder(k));
        }
        Ok(())
    }
}

pub fn load_graph(source: &GraphSource) -> Result<EmbeddedGraph, String> {
    match source {
        GraphSource::Generate(kind) => Ok(generate(*kind)),
        GraphSource::File(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            parse_graph(&text).map_err(|e| e.to_string())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusSummary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusReport {
    pub entries: Vec<GraphReport>,
}

#[derive(Serialize)]
struct CorpusJson<'a> {
    entries: &'a [GraphReport],
    summary: CorpusSummary,
    verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    volatile: Option<Volatile<'a>>,
}

#[derive(Serialize)]
struct Volatile<'a> {
    timings: BTreeMap<&'a str, &'a PhaseTimings>,
}

impl CorpusReport {
    pub fn summary(&self) -> CorpusSummary {
        let passed = self.entries.iter().filter(|e| e.verdict == Verdict::Pass).count();
        CorpusSummary { total: self.entries.len(), passed, failed: self.entries.len() - passed }
    }

    pub fn verdict(&self) -> Verdict {
        if self.summary().failed == 0 {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    /// JSON report; `volatile` adds per-phase timings, which differ run to run.
    pub fn to_json(&self, volatile: bool) -> String {
        let doc = CorpusJson {
            entries: &self.entries,
            summary: self.summary(),
            verdict: self.verdict(),
            volatile: volatile.then(|| Volatile {
                timings: self.entries.iter().map(|e| (e.graph.as_str(), &e.timings)).collect(),
            }),
        };
        serde_json::to_string_pretty(&doc).expect("report serialises")
    }

    /// One row per (graph, item), plus one per check and residual.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["graph", "kind", "item", "brute", "oracle", "formula", "status"]).expect("csv");
        let opt = |v: Option<u64>| v.map(|v| v.to_string()).unwrap_or_default();
        let status = |ok: bool| if ok { "ok" } else { "MISMATCH" };
        for e in &self.entries {
            for i in &e.items {
                w.write_record([
                    e.graph.as_str(),
                    "count",
                    &i.item,
                    &i.brute.to_string(),
                    &opt(i.oracle),
                    &opt(i.formula),
                    status(i.matches),
                ])
                .expect("csv");
            }
            for (name, r) in &e.residuals {
                w.write_record([e.graph.as_str(), "residual", name, &r.to_string(), "", "0", status(*r == 0)])
                    .expect("csv");
            }
            for c in &e.checks {
                w.write_record([e.graph.as_str(), "check", &c.name, "", "", "", status(c.passed)]).expect("csv");
            }
            for err in &e.errors {
                w.write_record([e.graph.as_str(), "error", err, "", "", "", "FAIL"]).expect("csv");
            }
        }
        String::from_utf8(w.into_inner().expect("csv flush")).expect("utf-8")
    }
}

/// Verifies every manifest entry on up to `threads` workers (0 = one per
/// available core). Reports come back in manifest order.
pub fn run_corpus(manifest: &CorpusManifest, threads: usize) -> CorpusReport {
    let count = manifest.entries.len();
    let workers = match threads {
        0 => std::thread::available_parallelism().map_or(1, |n| n.get()),
        n => n,
    }
    .min(count.max(1));
    let slots: Mutex<Vec<Option<GraphReport>>> = Mutex::new(vec![None; count]);
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= count {
                    break;
                }
                let source = manifest.entries[i].clone();
                let report = match load_graph(&source) {
                    Ok(g) => verify_graph(&g, source, &manifest.options),
                    Err(e) => GraphReport::failed(source, &manifest.options, e),
                };
                slots.lock().expect("no poisoned workers")[i] = Some(report);
            });
        }
    });
    let entries = slots.into_inner().expect("workers joined").into_iter().map(|r| r.expect("every slot filled")).collect();
    CorpusReport { entries }
}
