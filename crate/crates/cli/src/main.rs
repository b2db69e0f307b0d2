//! `schemalint`: verify schema.org annotations against the vocabulary and a
//! Domain Specification, and validate them against the page they annotate.
//!
//! Exit codes: 0 no finding at or above the fail level, 1 findings, 2 the
//! tool itself failed (unreadable input, bad DS or vocabulary, network).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use schemalint_core::annotation::{extract_annotation_blocks, parse_annotation};
use schemalint_core::content::ValidationConfig;
use schemalint_core::ds::{load_domain_specification, DomainSpecification};
use schemalint_core::pipeline::{validate_page, verify_annotation_document, verify_page, VerifyOptions};
use schemalint_core::report::{serialize_report, ReportFormat, Severity, VerificationReport};
use schemalint_core::vocab::{VocabularyGraph, PINNED_SNAPSHOT_ID};
use schemalint_fetch::{fetch, FetchConfig};
use url::Url;

#[derive(Parser)]
#[command(name = "schemalint", version, about = "Verify and validate schema.org annotations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check annotations against the vocabulary and, with --ds, a Domain Specification.
    Verify(VerifyArgs),
    /// Verify, then score annotation values against the page's visible content.
    Validate(ValidateArgs),
    /// Print the parsed annotation graphs.
    Extract(ExtractArgs),
}

#[derive(Args)]
struct InputArgs {
    /// URL, HTML file, or JSON-LD annotation file.
    input: String,
    /// Base URL for resolving relative links in a local HTML file.
    #[arg(long)]
    base_url: Option<Url>,
}

#[derive(Args)]
struct CheckArgs {
    /// Domain Specification document.
    #[arg(long)]
    ds: Option<PathBuf>,
    /// schema.org vocabulary in JSON-LD; defaults to the bundled snapshot.
    #[arg(long)]
    vocab: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Machine)]
    format: Format,
    /// Report domain and range deviations as errors.
    #[arg(long)]
    strict: bool,
    #[arg(long, value_enum, default_value_t = FailLevel::Error)]
    fail_level: FailLevel,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    check: CheckArgs,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    check: CheckArgs,
    /// Threshold, date order, decimal separator and boolean surface forms.
    #[arg(long)]
    validation_config: Option<PathBuf>,
}

#[derive(Args)]
struct ExtractArgs {
    #[command(flatten)]
    input: InputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Machine,
    Human,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FailLevel {
    Error,
    Warning,
    Never,
}

enum Input {
    Page { html: Vec<u8>, base: Option<Url>, target: String },
    Annotation { text: String, target: String },
}

fn looks_like_json(bytes: &[u8]) -> bool {
    let bytes = bytes.strip_prefix(b"\xEF\xBB\xBF").unwrap_or(bytes);
    matches!(bytes.iter().find(|b| !b.is_ascii_whitespace()), Some(b'{' | b'['))
}

fn read_input(args: &InputArgs) -> Result<Input> {
    if let Ok(url) = Url::parse(&args.input) {
        if matches!(url.scheme(), "http" | "https") {
            let fetched = fetch(&url, &FetchConfig::default())?;
            if !(200..300).contains(&fetched.status) {
                bail!("{url} answered with HTTP status {}", fetched.status);
            }
            let target = url.to_string();
            return Ok(Input::Page { html: fetched.body, base: Some(fetched.final_url), target });
        }
    }
    let path = Path::new(&args.input);
    let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    let target = path.display().to_string();
    if looks_like_json(&bytes) {
        let text = String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))?;
        Ok(Input::Annotation { text, target })
    } else {
        Ok(Input::Page { html: bytes, base: args.base_url.clone(), target })
    }
}

fn load_vocab(path: Option<&Path>) -> Result<VocabularyGraph> {
    match path {
        None => Ok(VocabularyGraph::pinned()?),
        Some(path) => {
            let bytes = fs::read(path).with_context(|| format!("cannot read vocabulary {}", path.display()))?;
            let id = path.file_stem().map_or_else(|| PINNED_SNAPSHOT_ID.into(), |s| s.to_string_lossy().into_owned());
            VocabularyGraph::load(&bytes, id).with_context(|| format!("invalid vocabulary {}", path.display()))
        }
    }
}

fn load_ds(path: Option<&Path>, vocab: &VocabularyGraph) -> Result<Option<DomainSpecification>> {
    let Some(path) = path else {
        return Ok(None);
    };
    let bytes = fs::read(path).with_context(|| format!("cannot read domain specification {}", path.display()))?;
    let ds = load_domain_specification(&bytes, vocab)
        .with_context(|| format!("invalid domain specification {}", path.display()))?;
    Ok(Some(ds))
}

fn emit(report: &VerificationReport, check: &CheckArgs) -> Result<ExitCode> {
    let format = match check.format {
        Format::Machine => ReportFormat::Machine,
        Format::Human => ReportFormat::Human,
    };
    std::io::stdout().write_all(&serialize_report(report, format))?;
    let failing = match check.fail_level {
        FailLevel::Error => report.has_at_least(Severity::Error),
        FailLevel::Warning => report.has_at_least(Severity::Warning),
        FailLevel::Never => false,
    };
    Ok(if failing { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn run_verify(args: &VerifyArgs) -> Result<ExitCode> {
    let vocab = load_vocab(args.check.vocab.as_deref())?;
    let ds = load_ds(args.check.ds.as_deref(), &vocab)?;
    let options = VerifyOptions { vocab: &vocab, ds: ds.as_ref(), strict: args.check.strict };
    let report = match read_input(&args.input)? {
        Input::Page { html, base, target } => verify_page(&html, base.as_ref(), &target, options),
        Input::Annotation { text, target } => verify_annotation_document(&text, &target, options),
    };
    emit(&report, &args.check)
}

fn run_validate(args: &ValidateArgs) -> Result<ExitCode> {
    let vocab = load_vocab(args.check.vocab.as_deref())?;
    let ds = load_ds(args.check.ds.as_deref(), &vocab)?;
    let config = match &args.validation_config {
        None => ValidationConfig::default(),
        Some(path) => {
            let bytes = fs::read(path).with_context(|| format!("cannot read validation config {}", path.display()))?;
            ValidationConfig::from_json(&bytes)
                .with_context(|| format!("invalid validation config {}", path.display()))?
        }
    };
    let options = VerifyOptions { vocab: &vocab, ds: ds.as_ref(), strict: args.check.strict };
    let report = match read_input(&args.input)? {
        Input::Page { html, base, target } => validate_page(&html, base.as_ref(), &target, options, &config),
        Input::Annotation { target, .. } => bail!("{target} is an annotation document; validation needs a page"),
    };
    emit(&report, &args.check)
}

fn run_extract(args: &ExtractArgs) -> Result<ExitCode> {
    let blocks = match read_input(&args.input)? {
        Input::Page { html, base, .. } => extract_annotation_blocks(&html, base.as_ref()),
        Input::Annotation { text, .. } => vec![schemalint_core::annotation::RawBlock::json_ld(text, 0)],
    };
    let rendered: Vec<serde_json::Value> = blocks
        .iter()
        .map(|block| match parse_annotation(block) {
            Ok(parsed) => parsed.graph.to_json(),
            Err(entries) => serde_json::json!({ "blockIndex": block.block_index, "errors": entries }),
        })
        .collect();
    let mut out = serde_json::to_vec_pretty(&rendered)?;
    out.push(b'\n');
    std::io::stdout().write_all(&out)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(args) => run_verify(args),
        Command::Validate(args) => run_validate(args),
        Command::Extract(args) => run_extract(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("schemalint: {err:#}");
            ExitCode::from(2)
        }
    }
}
