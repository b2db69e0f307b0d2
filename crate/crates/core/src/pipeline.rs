//! End-to-end runs over a page or a standalone annotation document.

use url::Url;

use crate::annotation::{extract_annotation_blocks, parse_annotation, AnnotationGraph, AnnotationPath, RawBlock};
use crate::content::{extract_page_content, validate_annotation_against_page, ContentScore, ValidationConfig};
use crate::ds::{verify_against_ds, DomainSpecification};
use crate::report::{merge_reports, ErrorCode, ReportEntry, ReportMetadata, VerificationReport};
use crate::verify::SchemaOrgVerifier;
use crate::vocab::VocabularyGraph;

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions<'a> {
    pub vocab: &'a VocabularyGraph,
    pub ds: Option<&'a DomainSpecification>,
    pub strict: bool,
}

impl<'a> VerifyOptions<'a> {
    pub fn new(vocab: &'a VocabularyGraph) -> Self {
        Self { vocab, ds: None, strict: false }
    }

    fn metadata(&self) -> ReportMetadata {
        ReportMetadata {
            snapshot_id: self.vocab.snapshot_id().to_owned(),
            ds_name: self.ds.map(|ds| ds.name.clone()),
            content_score: None,
        }
    }
}

/// Result for one annotation block; `graph` is `None` when it did not parse.
#[derive(Debug, Clone)]
pub struct BlockOutcome {
    pub block_index: usize,
    pub graph: Option<AnnotationGraph>,
    pub entries: Vec<ReportEntry>,
}

/// Parses and verifies each block independently.
pub fn verify_blocks(blocks: &[RawBlock], options: VerifyOptions<'_>) -> Vec<BlockOutcome> {
    let verifier = SchemaOrgVerifier::new(options.vocab).strict(options.strict);
    blocks
        .iter()
        .map(|block| match parse_annotation(block) {
            Err(entries) => BlockOutcome { block_index: block.block_index, graph: None, entries },
            Ok(parsed) => {
                let mut entries = parsed.warnings;
                entries.extend(verifier.verify(&parsed.graph));
                if let Some(ds) = options.ds {
                    entries.extend(verify_against_ds(&parsed.graph, ds, options.vocab));
                }
                BlockOutcome { block_index: block.block_index, graph: Some(parsed.graph), entries }
            }
        })
        .collect()
}

fn no_annotation() -> ReportEntry {
    ReportEntry::new(
        ErrorCode::EmptyAnnotation,
        AnnotationPath::block(),
        "page carries no JSON-LD or Microdata annotation",
    )
}

fn report(outcomes: Vec<BlockOutcome>, target: &str, metadata: ReportMetadata) -> VerificationReport {
    merge_reports(outcomes.into_iter().map(|o| o.entries), target, metadata)
}

/// Verifies a standalone JSON-LD document.
pub fn verify_annotation_document(text: &str, target: &str, options: VerifyOptions<'_>) -> VerificationReport {
    let outcomes = verify_blocks(&[RawBlock::json_ld(text, 0)], options);
    report(outcomes, target, options.metadata())
}

/// Verifies every annotation block of a page.
pub fn verify_page(
    html: &[u8],
    base_url: Option<&Url>,
    target: &str,
    options: VerifyOptions<'_>,
) -> VerificationReport {
    let blocks = extract_annotation_blocks(html, base_url);
    if blocks.is_empty() {
        return merge_reports([vec![no_annotation()]], target, options.metadata());
    }
    report(verify_blocks(&blocks, options), target, options.metadata())
}

/// Verification plus content validation of every parsed block against the
/// page's visible content.
pub fn validate_page(
    html: &[u8],
    base_url: Option<&Url>,
    target: &str,
    options: VerifyOptions<'_>,
    config: &ValidationConfig,
) -> VerificationReport {
    let blocks = extract_annotation_blocks(html, base_url);
    let mut metadata = options.metadata();
    if blocks.is_empty() {
        metadata.content_score = Some(ContentScore::from_values(Vec::new(), config.threshold));
        return merge_reports([vec![no_annotation()]], target, metadata);
    }
    let page = extract_page_content(html, base_url, config.extraction_options());
    let mut outcomes = verify_blocks(&blocks, options);
    let mut values = Vec::new();
    for outcome in &mut outcomes {
        if let Some(graph) = &outcome.graph {
            let validation = validate_annotation_against_page(graph, &page, config, options.vocab);
            outcome.entries.extend(validation.entries);
            values.extend(validation.values);
        }
    }
    metadata.content_score = Some(ContentScore::from_values(values, config.threshold));
    report(outcomes, target, metadata)
}
