use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use fullerene46::census::{count_matchings, count_pattern, Pattern};
use fullerene46::plane_graph::validate_fullerene;
use fullerene46::structure::{classify_structure, six_cycle_census, SixCycleCensus, StructureClass};
use fullerene46::verify::{
    load_graph, run_corpus, CorpusManifest, CorpusReport, GraphSource, OracleMode, Verdict, VerifyOptions,
};
use fullerene46::{generate, EmbeddedGraph, GraphKind};

/// Largest tube parameter accepted without `--allow-large`.
const TUBE_CAP: usize = 40;

#[derive(Parser)]
#[command(name = "bnf", version, about = "Build, classify and census (4,6)-fullerene graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated graph in bnf-graph format
    Generate {
        #[arg(long = "generate", value_name = "KIND[:PARAM]", value_parser = parse_kind)]
        kind: GraphKind,
        #[arg(long)]
        allow_large: bool,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Print the structure class, h, y, square profile and six-cycle census
    Classify {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Print the number of copies of a pattern, or of k-matchings
    Count {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_name = "NAME", value_parser = parse_pattern, required_unless_present = "k", conflicts_with = "k")]
        pattern: Option<Pattern>,
        #[arg(long, value_name = "INT")]
        k: Option<usize>,
    },
    /// Check counts against closed forms and identities; exit 0 iff PASS
    Verify {
        #[command(flatten)]
        source: OptionalSource,
        /// Manifest file, or `default` for the built-in corpus
        #[arg(long, value_name = "PATH|default", conflicts_with_all = ["generate", "input"])]
        corpus: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Compare against the superseded path count formula
        #[arg(long)]
        legacy_formulas: bool,
        #[arg(long, conflicts_with = "oracle")]
        no_oracle: bool,
        /// Run the subset oracle even on large graphs
        #[arg(long)]
        oracle: bool,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    #[arg(long, value_name = "KIND[:PARAM]", value_parser = parse_kind)]
    generate: Option<GraphKind>,
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,
    #[arg(long)]
    allow_large: bool,
}

#[derive(Args)]
#[group(multiple = false)]
struct OptionalSource {
    #[arg(long, value_name = "KIND[:PARAM]", value_parser = parse_kind)]
    generate: Option<GraphKind>,
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,
    #[arg(long)]
    allow_large: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

fn parse_kind(s: &str) -> Result<GraphKind, String> {
    s.parse().map_err(|e: fullerene46::generators::UnknownKind| e.to_string())
}

fn parse_pattern(s: &str) -> Result<Pattern, String> {
    Pattern::by_name(s).ok_or_else(|| format!("unknown pattern {s}"))
}

/// How a run ended short of success.
enum Failure {
    /// Bad invocation; exit 2.
    Usage(String),
    /// Unusable graph or failed verification; exit 1.
    Graph(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Graph(e)
    }
}

fn check_cap(kind: GraphKind, allow_large: bool) -> Result<(), Failure> {
    match kind {
        GraphKind::Tube(t) if t > TUBE_CAP && !allow_large => Err(Failure::Usage(format!(
            "tube:{t} exceeds the default cap of {TUBE_CAP}; pass --allow-large to build it"
        ))),
        _ => Ok(()),
    }
}

fn resolve(kind: Option<GraphKind>, input: Option<&Path>, allow_large: bool) -> Result<(EmbeddedGraph, GraphSource), Failure> {
    let source = match (kind, input) {
        (Some(kind), _) => {
            check_cap(kind, allow_large)?;
            GraphSource::Generate(kind)
        }
        (None, Some(path)) => GraphSource::File(path.to_path_buf()),
        (None, None) => return Err(Failure::Usage("a graph source (--generate or --input) is required".into())),
    };
    let g = load_graph(&source).map_err(|e| Failure::Graph(anyhow::anyhow!(e)))?;
    Ok((g, source))
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn threads_from_env() -> Result<usize, Failure> {
    match std::env::var("BNF_THREADS") {
        Err(_) => Ok(0),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("BNF_THREADS must be a non-negative integer, got `{v}`"))),
    }
}

#[derive(Serialize)]
struct ClassifyJson<'a> {
    class: &'a StructureClass,
    y: usize,
    six_cycles: SixCycleCensus,
}

fn classify_text(class: &StructureClass, census: &SixCycleCensus) -> String {
    let p = &class.profile;
    let mut text = format!("{} h={} y={}\n", class.kind, class.h, class.y());
    text += &format!("x0={} x1={} x2={}", p.x0, p.x1, p.x2);
    if p.x_more > 0 {
        text += &format!(" x3+={}", p.x_more);
    }
    text += &format!(" longest-square-line={}\n", p.longest_chain());
    text += &format!(
        "six-cycles={} hex-face={} dual-square={} square-cap={} capped-tube={}\n",
        census.total(),
        census.hex_face,
        census.dual_square,
        census.square_cap,
        census.capped_tube
    );
    text
}

fn verify_text(report: &CorpusReport) -> String {
    let mut text = String::new();
    for e in &report.entries {
        let class = e.class.map(|c| c.to_string()).unwrap_or_else(|| "-".into());
        let matched = e.items.iter().filter(|i| i.matches).count();
        let zero = e.residuals.values().filter(|&&r| r == 0).count();
        text += &format!(
            "{} {} class={} h={} items={}/{} identities={}/{}\n",
            e.verdict,
            e.graph,
            class,
            e.h.map_or("-".into(), |h| h.to_string()),
            matched,
            e.items.len(),
            zero,
            e.residuals.len()
        );
        for i in e.items.iter().filter(|i| !i.matches) {
            let show = |v: Option<u64>| v.map_or("-".into(), |v| v.to_string());
            text += &format!(
                "  mismatch {}: brute {} oracle {} formula {}\n",
                i.item,
                i.brute,
                show(i.oracle),
                show(i.formula)
            );
        }
        for (name, r) in e.residuals.iter().filter(|(_, &r)| r != 0) {
            text += &format!("  identity {name}: residual {r}\n");
        }
        for c in e.checks.iter().filter(|c| !c.passed) {
            text += &format!("  check {}: {}\n", c.name, c.detail);
        }
        for err in &e.errors {
            text += &format!("  error: {err}\n");
        }
    }
    let s = report.summary();
    text += &format!("{} {} of {} graphs passed\n", report.verdict(), s.passed, s.total);
    text
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Generate { kind, allow_large, out } => {
            check_cap(kind, allow_large)?;
            emit(out.as_deref(), &fullerene46::generators::serialize_graph(&generate(kind)))?;
        }
        Command::Classify { source, format, out } => {
            let (g, _) = resolve(source.generate, source.input.as_deref(), source.allow_large)?;
            validate_fullerene(&g).map_err(anyhow::Error::from)?;
            let class = classify_structure(&g).map_err(anyhow::Error::from)?;
            let census = six_cycle_census(&g).map_err(anyhow::Error::from)?;
            let text = match format {
                Format::Text => classify_text(&class, &census),
                Format::Json => {
                    let doc = ClassifyJson { class: &class, y: class.y(), six_cycles: census };
                    serde_json::to_string_pretty(&doc).map_err(anyhow::Error::from)? + "\n"
                }
                Format::Csv => {
                    let p = &class.profile;
                    format!(
                        "class,h,y,x0,x1,x2,six_cycles,hex_face,dual_square,square_cap,capped_tube\n\"{}\",{},{},{},{},{},{},{},{},{},{}\n",
                        class.kind,
                        class.h,
                        class.y(),
                        p.x0,
                        p.x1,
                        p.x2,
                        census.total(),
                        census.hex_face,
                        census.dual_square,
                        census.square_cap,
                        census.capped_tube
                    )
                }
            };
            emit(out.as_deref(), &text)?;
        }
        Command::Count { source, pattern, k } => {
            let (g, _) = resolve(source.generate, source.input.as_deref(), source.allow_large)?;
            validate_fullerene(&g).map_err(anyhow::Error::from)?;
            let value = match (pattern, k) {
                (Some(p), _) => count_pattern(&g, &p).map_err(anyhow::Error::from)?,
                (None, Some(k)) => count_matchings(&g, k),
                (None, None) => return Err(Failure::Usage("one of --pattern or --k is required".into())),
            };
            emit(None, &format!("{value}\n"))?;
        }
        Command::Verify { source, corpus, format, legacy_formulas, no_oracle, oracle, out } => {
            let threads = threads_from_env()?;
            let mut manifest = match (corpus.as_deref(), source.generate, source.input) {
                (Some("default"), _, _) => CorpusManifest::default_corpus(),
                (Some(path), _, _) => {
                    CorpusManifest::load(Path::new(path)).map_err(|e| Failure::Usage(e.to_string()))?
                }
                (None, Some(kind), _) => {
                    check_cap(kind, source.allow_large)?;
                    single(GraphSource::Generate(kind))
                }
                (None, None, Some(path)) => single(GraphSource::File(path)),
                (None, None, None) => {
                    return Err(Failure::Usage("verify needs --corpus, --generate or --input".into()))
                }
            };
            if legacy_formulas {
                manifest.options.legacy_formulas = true;
            }
            if no_oracle {
                manifest.options.oracle = OracleMode::Off;
            } else if oracle {
                manifest.options.oracle = OracleMode::On;
            }
            let report = run_corpus(&manifest, threads);
            let text = match format {
                Format::Json => report.to_json(true) + "\n",
                Format::Csv => report.to_csv(),
                Format::Text => verify_text(&report),
            };
            emit(out.as_deref(), &text)?;
            if report.verdict() == Verdict::Fail {
                let s = report.summary();
                return Err(Failure::Graph(anyhow::anyhow!("{} of {} graphs failed verification", s.failed, s.total)));
            }
        }
    }
    Ok(())
}

fn single(source: GraphSource) -> CorpusManifest {
    CorpusManifest { entries: vec![source], options: VerifyOptions::default() }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(Failure::Graph(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
