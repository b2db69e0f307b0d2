//! End-to-end acceptance checks, one PASS/FAIL line each.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use schemalint_core::annotation::{extract_annotation_blocks, parse_annotation, AnnotationGraph, RawBlock};
use schemalint_core::content::{ConsistencyStatus, ContentKind, ValidationConfig};
use schemalint_core::pipeline::{verify_annotation_document, verify_page, VerifyOptions};
use schemalint_core::report::{parse_machine_report, serialize_report, ReportFormat};
use schemalint_core::vocab::VocabularyGraph;
use support::{check_ds_invariants, content_page, content_validation, random_content_case, random_ds, vocab};

const VOCAB_LOAD_BUDGET: Duration = Duration::from_secs(5);
const RANDOM_DS_COUNT: u64 = 150;
const CONTENT_CASES: u64 = 100;
const SCORE_TOLERANCE: f64 = 1e-9;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn read(rel: &str) -> Vec<u8> {
    std::fs::read(fixtures().join(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= SCORE_TOLERANCE
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($msg)+));
        }
    };
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn vocabulary() -> Outcome {
    let started = Instant::now();
    let fresh = VocabularyGraph::pinned().map_err(|e| e.to_string())?;
    let elapsed = started.elapsed();
    ensure!(elapsed < VOCAB_LOAD_BUDGET, "loading took {elapsed:?}");
    let (classes, properties) = (fresh.classes().len(), fresh.properties().len());
    ensure!(classes == 857 && properties == 1384, "{classes} classes, {properties} properties");
    let orphans: Vec<_> =
        fresh.classes().keys().filter(|c| !fresh.is_subclass_of(c, "Thing").unwrap_or(false)).collect();
    ensure!(orphans.is_empty(), "classes not reaching Thing: {orphans:?}");
    let known = |t: &String| fresh.is_class(t) || fresh.is_datatype(t);
    let dangling: Vec<_> = fresh
        .properties()
        .iter()
        .filter(|(_, def)| !def.domain_includes.iter().chain(&def.range_includes).all(known))
        .map(|(name, _)| name)
        .collect();
    ensure!(dangling.is_empty(), "properties with unknown domain or range terms: {dangling:?}");
    Ok(format!("{classes} classes, {properties} properties, loaded in {elapsed:.2?}"))
}

fn ds_compliance() -> Outcome {
    for seed in 0..RANDOM_DS_COUNT {
        let mut rng = StdRng::seed_from_u64(seed);
        let ds = random_ds(vocab(), &mut rng, 3);
        ds.check(vocab()).map_err(|e| format!("seed {seed}: generated DS invalid: {e}"))?;
        check_ds_invariants(&ds, &mut rng).map_err(|e| format!("seed {seed}: {e}"))?;
    }
    Ok(format!("{RANDOM_DS_COUNT} random DS, depth <= 3"))
}

fn findings_of(text: &str) -> Vec<(String, String)> {
    verify_annotation_document(text, "t", VerifyOptions::new(vocab()))
        .entries
        .iter()
        .map(|e| (e.code.to_string(), e.path.to_string()))
        .collect()
}

fn fault_variants() -> Outcome {
    let clean = findings_of(std::str::from_utf8(&read("sdo/event.jsonld")).unwrap());
    ensure!(clean.is_empty(), "clean event reports {clean:?}");
    let expected = [
        ("event-unknown-type", "E201", "$0"),
        ("event-unknown-property", "E202", "$0.organiser"),
        ("event-domain-violation", "E203", "$0.birthDate"),
        ("event-range-violation", "E204", "$0.location"),
        ("event-malformed-date", "E205", "$0.startDate"),
        ("event-empty-name", "E206", "$0.name"),
        ("event-duplicated-value", "E207", "$0.image[1]"),
        ("event-end-before-start", "E208", "$0.endDate"),
    ];
    for (file, code, path) in expected {
        let got = findings_of(std::str::from_utf8(&read(&format!("sdo/{file}.jsonld"))).unwrap());
        ensure!(got == [(code.to_owned(), path.to_owned())], "{file}: expected {code} at {path}, got {got:?}");
    }
    Ok("clean event plus 8 single-fault variants".into())
}

fn sorted_findings(entries: &[schemalint_core::report::ReportEntry]) -> Vec<(String, String)> {
    let mut out: Vec<_> = entries.iter().map(|e| (e.code.to_string(), e.path.to_string())).collect();
    out.sort();
    out
}

fn single_graph(block: &RawBlock) -> Result<AnnotationGraph, String> {
    parse_annotation(block).map(|p| p.graph).map_err(|e| format!("{e:?}"))
}

fn format_equivalence() -> Outcome {
    let mut total = 0;
    for name in ["event", "hotel", "product", "recipe", "restaurant"] {
        let jsonld = String::from_utf8(read(&format!("equivalence/{name}.jsonld"))).unwrap();
        let html = read(&format!("equivalence/{name}.html"));
        let blocks = extract_annotation_blocks(&html, None);
        ensure!(blocks.len() == 1, "{name}.html: {} blocks", blocks.len());
        let from_json = single_graph(&RawBlock::json_ld(jsonld.clone(), 0))?;
        let from_microdata = single_graph(&blocks[0])?;
        ensure!(from_json.structure() == from_microdata.structure(), "{name}: graphs differ");
        let a = sorted_findings(&verify_annotation_document(&jsonld, "t", VerifyOptions::new(vocab())).entries);
        let b = sorted_findings(&verify_page(&html, None, "t", VerifyOptions::new(vocab())).entries);
        ensure!(a == b, "{name}: JSON-LD {a:?} vs Microdata {b:?}");
        total += a.len();
    }
    Ok(format!("5 pairs isomorphic, {total} findings identical"))
}

fn content_extremes() -> Outcome {
    let base = url::Url::parse("https://alpenhof.example/").unwrap();
    let config = ValidationConfig::from_json(&read("validation-config.json")).map_err(|e| e.to_string())?;
    let options = VerifyOptions::new(vocab());
    let good = schemalint_core::pipeline::validate_page(
        &read("pages/hotel-alpenhof.html"),
        Some(&base),
        "t",
        options,
        &config,
    );
    let good_score = good.content_score.as_ref().and_then(|c| c.overall.score);
    ensure!(good_score.is_some_and(|s| close(s, 1.0)), "hotel-alpenhof scored {good_score:?}");
    let bad = schemalint_core::pipeline::validate_page(
        &read("pages/hotel-mismatch.html"),
        Some(&base),
        "t",
        options,
        &config,
    );
    let bad_score = bad.content_score.as_ref().and_then(|c| c.overall.score);
    ensure!(bad_score.is_some_and(|s| close(s, 0.0)), "hotel-mismatch scored {bad_score:?}");

    let mut rng = StdRng::seed_from_u64(7);
    for i in 0..CONTENT_CASES {
        let case = random_content_case(&mut rng);
        let full = content_validation(&content_page(&case, &[true; 8])).overall.score;
        let empty = content_validation(&content_page(&case, &[false; 8])).overall.score;
        ensure!(full.is_some_and(|s| close(s, 1.0)), "case {i}: full page scored {full:?}");
        ensure!(empty.is_some_and(|s| close(s, 0.0)), "case {i}: empty page scored {empty:?}");
        let mut keep = [true; 8];
        let mut previous = 1.0;
        while keep.iter().any(|k| *k) {
            let on: Vec<usize> = (0..8).filter(|i| keep[*i]).collect();
            keep[on[rng.gen_range(0..on.len())]] = false;
            let score = content_validation(&content_page(&case, &keep)).overall.score.unwrap_or(0.0);
            ensure!(score <= previous + SCORE_TOLERANCE, "case {i}: score rose from {previous} to {score}");
            previous = score;
        }
    }
    Ok(format!("fixtures 1.0 / 0.0, {CONTENT_CASES} random pages monotone under deletion"))
}

fn oracles() -> Outcome {
    let validate = |json: &str, html: &str| {
        let graph = parse_annotation(&RawBlock::json_ld(json, 0)).unwrap().graph;
        let base = url::Url::parse("https://x.example/").unwrap();
        let page = schemalint_core::content::extract_page_content(html.as_bytes(), Some(&base), Default::default());
        schemalint_core::content::validate_annotation_against_page(&graph, &page, &ValidationConfig::default(), vocab())
    };
    let v = validate(r#"{"@type":"Hotel","name":"Hotel Alpenhof Zillertal"}"#, "<p>Hotel Alpenhof Fügen</p>");
    let ratio = v.values[0].score.unwrap_or(f64::NAN);
    ensure!(close(ratio, 2.0 / 3.0), "containment ratio {ratio}");
    ensure!(v.values[0].status == ConsistencyStatus::Unmatched, "status {:?}", v.values[0].status);

    let v = validate(
        r#"{"@type":"Hotel","url":"https://x.example/hotel/","foundingDate":"2001-02-03","petsAllowed":true}"#,
        r#"<a href="/hotel">Hotel</a>"#,
    );
    let kinds: Vec<_> = v.values.iter().map(|x| x.kind).collect();
    ensure!(kinds == [ContentKind::Url, ContentKind::Date, ContentKind::Boolean], "kinds {kinds:?}");
    let o = &v.overall;
    ensure!(
        o.score.is_some_and(|s| close(s, 0.5)) && o.checked == 2 && o.matched == 1 && o.unverifiable == 1,
        "aggregate {o:?}"
    );
    Ok("containment 2/3, aggregate 0.5 (checked 2, unverifiable 1)".into())
}

fn cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_schemalint")).args(args).output().expect("binary runs")
}

fn fixture_arg(rel: &str) -> String {
    fixtures().join(rel).display().to_string()
}

fn report_round_trip() -> Outcome {
    let mut runs: Vec<Vec<String>> = Vec::new();
    for dir in ["sdo", "equivalence"] {
        for entry in std::fs::read_dir(fixtures().join(dir)).unwrap() {
            runs.push(vec!["verify".into(), entry.unwrap().path().display().to_string()]);
        }
    }
    for page in ["hotel-alpenhof", "hotel-mismatch", "no-annotation"] {
        runs.push(vec![
            "validate".into(),
            fixture_arg(&format!("pages/{page}.html")),
            "--base-url".into(),
            "https://alpenhof.example/".into(),
            "--validation-config".into(),
            fixture_arg("validation-config.json"),
        ]);
    }
    runs.push(vec!["verify".into(), fixture_arg("sdo/event.jsonld"), "--ds".into(), fixture_arg("ds/event.json")]);
    for run in &runs {
        let args: Vec<&str> = run.iter().map(String::as_str).collect();
        let out = cli(&args);
        ensure!(out.status.code() != Some(2), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
        let parsed = parse_machine_report(&out.stdout).map_err(|e| format!("{args:?}: {e}"))?;
        ensure!(serialize_report(&parsed, ReportFormat::Machine) == out.stdout, "{args:?}: bytes differ");
    }
    Ok(format!("{} CLI machine reports byte-identical", runs.len()))
}

fn exit_codes() -> Outcome {
    let inputs = [
        ("clean", fixture_arg("sdo/event.jsonld")),
        ("warning-only", fixture_arg("sdo/event-domain-violation.jsonld")),
        ("faulty", fixture_arg("sdo/event-unknown-type.jsonld")),
        ("unreadable", fixture_arg("sdo/does-not-exist.jsonld")),
    ];
    let expected: BTreeMap<(&str, &str), i32> = [
        (("clean", "error"), 0),
        (("clean", "warning"), 0),
        (("clean", "never"), 0),
        (("warning-only", "error"), 0),
        (("warning-only", "warning"), 1),
        (("warning-only", "never"), 0),
        (("faulty", "error"), 1),
        (("faulty", "warning"), 1),
        (("faulty", "never"), 0),
        (("unreadable", "error"), 2),
        (("unreadable", "warning"), 2),
        (("unreadable", "never"), 2),
    ]
    .into();
    for ((input, level), want) in &expected {
        let path = &inputs.iter().find(|(n, _)| n == input).unwrap().1;
        let got = cli(&["verify", path, "--fail-level", level]).status.code();
        ensure!(got == Some(*want), "{input} at --fail-level {level}: exit {got:?}, expected {want}");
    }
    Ok(format!("{} input/fail-level combinations", expected.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("vocabulary integrity", vocabulary),
        ("DS compliance invariants", ds_compliance),
        ("single-fault fixtures", fault_variants),
        ("JSON-LD / Microdata equivalence", format_equivalence),
        ("content score extremes and monotonicity", content_extremes),
        ("content scoring oracles", oracles),
        ("machine report round trip", report_round_trip),
        ("CLI exit codes", exit_codes),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
