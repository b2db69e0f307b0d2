//! Consistency of annotation values with the visible content of the page
//! they annotate.
//!
//! Every literal or external reference reachable from the roots is scored
//! in `[0, 1]` by kind: URLs, dates and numbers by exact membership after
//! normalization, strings and enumeration members by token containment,
//! booleans only when the configuration supplies surface forms. The page
//! score is the unweighted mean over the values that could be checked.

mod normalize;
mod page;

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::annotation::{AnnotationGraph, AnnotationPath, LiteralType, PropertyValue, ValueKind};
use crate::report::{sort_entries, ErrorCode, ReportEntry};
use crate::terms::strip_schema_prefix;
use crate::vocab::VocabularyGraph;

pub use normalize::{
    normalize_number, normalize_url, scan_dates, scan_numbers, split_camel_case, tokenize, DateOrder, DecimalSeparator,
};
pub use page::{extract_page_content, ExtractionOptions, PageContent};

pub const DEFAULT_THRESHOLD: f64 = 0.75;

fn default_threshold() -> f64 {
    DEFAULT_THRESHOLD
}

/// Surface forms that express a boolean property on a page, e.g.
/// `petsAllowed: {"true": ["pets welcome"], "false": ["no pets"]}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BooleanForms {
    #[serde(default, rename = "true")]
    pub when_true: Vec<String>,
    #[serde(default, rename = "false")]
    pub when_false: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ValidationConfig {
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    #[serde(default)]
    pub date_order: DateOrder,
    #[serde(default)]
    pub decimal_separator: DecimalSeparator,
    #[serde(default)]
    pub boolean_forms: BTreeMap<String, BooleanForms>,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self {
            threshold: DEFAULT_THRESHOLD,
            date_order: DateOrder::default(),
            decimal_separator: DecimalSeparator::default(),
            boolean_forms: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("malformed validation config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("threshold {0} is outside [0, 1]")]
    Threshold(f64),
}

impl ValidationConfig {
    pub fn from_json(source: &[u8]) -> Result<Self, ConfigError> {
        let config: Self = serde_json::from_slice(source)?;
        if !(0.0..=1.0).contains(&config.threshold) {
            return Err(ConfigError::Threshold(config.threshold));
        }
        Ok(config)
    }

    pub fn extraction_options(&self) -> ExtractionOptions {
        ExtractionOptions { date_order: self.date_order, decimal_separator: self.decimal_separator }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ContentKind {
    Url,
    Str,
    Boolean,
    Enumeration,
    RatingValue,
    Date,
    Time,
    Number,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ConsistencyStatus {
    Matched,
    Unmatched,
    Unverifiable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ValueConsistency {
    pub path: AnnotationPath,
    pub kind: ContentKind,
    /// `None` when the value cannot be checked.
    pub score: Option<f64>,
    pub status: ConsistencyStatus,
    pub evidence: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OverallScore {
    /// Mean of the checked values' scores; `None` when nothing was checked.
    pub score: Option<f64>,
    pub checked: usize,
    pub matched: usize,
    pub unverifiable: usize,
}

impl OverallScore {
    pub fn aggregate(values: &[ValueConsistency]) -> Self {
        let scores: Vec<f64> = values.iter().filter_map(|v| v.score).collect();
        Self {
            score: (!scores.is_empty()).then(|| scores.iter().sum::<f64>() / scores.len() as f64),
            checked: scores.len(),
            matched: values.iter().filter(|v| v.status == ConsistencyStatus::Matched).count(),
            unverifiable: values.iter().filter(|v| v.status == ConsistencyStatus::Unverifiable).count(),
        }
    }
}

/// Page-level result as carried by reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ContentScore {
    pub overall: OverallScore,
    pub threshold: f64,
    /// How value kinds are weighted in the mean; always `equal`.
    pub weighting: String,
    pub values: Vec<ValueConsistency>,
}

impl ContentScore {
    pub fn from_values(values: Vec<ValueConsistency>, threshold: f64) -> Self {
        Self { overall: OverallScore::aggregate(&values), threshold, weighting: "equal".into(), values }
    }
}

/// Findings and per-value scores for one annotation graph.
#[derive(Debug, Clone, PartialEq)]
pub struct ContentValidation {
    pub entries: Vec<ReportEntry>,
    pub values: Vec<ValueConsistency>,
    pub overall: OverallScore,
}

fn is_rating(property: &str) -> bool {
    matches!(property, "ratingValue" | "bestRating" | "worstRating")
}

/// Kind a literal or external reference is scored as.
pub fn content_kind(property: &str, raw: &str, datatype: LiteralType, vocab: &VocabularyGraph) -> ContentKind {
    let trimmed = raw.trim();
    let member = strip_schema_prefix(trimmed);
    if let Some(owners) = vocab.enumerations_of_member(member) {
        let prefixed = member.len() != trimmed.len();
        let expected = vocab.property(property).is_some_and(|def| {
            def.range_includes
                .iter()
                .any(|r| owners.iter().any(|o| o == r || vocab.is_subclass_of(o, r).unwrap_or(false)))
        });
        if prefixed || expected {
            return if owners.contains("Boolean") { ContentKind::Boolean } else { ContentKind::Enumeration };
        }
    }
    match datatype {
        LiteralType::Url => ContentKind::Url,
        LiteralType::Date | LiteralType::DateTime => ContentKind::Date,
        LiteralType::Time | LiteralType::Duration => ContentKind::Time,
        LiteralType::Integer | LiteralType::Float if is_rating(property) => ContentKind::RatingValue,
        LiteralType::Integer | LiteralType::Float => ContentKind::Number,
        LiteralType::Boolean => ContentKind::Boolean,
        LiteralType::Text | LiteralType::Undetermined => ContentKind::Str,
    }
}

/// Fraction of the distinct tokens of `text` found on the page; `None`
/// when `text` has no tokens.
fn containment(text: &str, page: &PageContent) -> Option<(f64, usize, usize)> {
    let tokens: HashSet<String> = tokenize(text).into_iter().collect();
    if tokens.is_empty() {
        return None;
    }
    let found = tokens.iter().filter(|t| page.text_tokens.contains(*t)).count();
    Some((found as f64 / tokens.len() as f64, found, tokens.len()))
}

fn is_true(raw: &str) -> bool {
    matches!(strip_schema_prefix(raw.trim()), "true" | "True")
}

/// Scores one literal or external reference held by `property`.
pub fn consistency_of_value(
    property: &str,
    value: &PropertyValue,
    page: &PageContent,
    config: &ValidationConfig,
    vocab: &VocabularyGraph,
) -> ValueConsistency {
    let (raw, datatype) = match &value.kind {
        ValueKind::Literal { raw, datatype } => (raw.as_str(), *datatype),
        ValueKind::Reference(iri) => (iri.as_str(), LiteralType::Url),
        ValueKind::Entity(_) => {
            return ValueConsistency {
                path: value.path.clone(),
                kind: ContentKind::Str,
                score: None,
                status: ConsistencyStatus::Unverifiable,
                evidence: "entity values are checked through their properties".into(),
            }
        }
    };
    let kind = content_kind(property, raw, datatype, vocab);
    let (score, evidence) = score_value(kind, property, raw, page, config);
    let status = match score {
        None => ConsistencyStatus::Unverifiable,
        Some(s) if s >= config.threshold => ConsistencyStatus::Matched,
        Some(_) => ConsistencyStatus::Unmatched,
    };
    ValueConsistency { path: value.path.clone(), kind, score, status, evidence }
}

fn found(hit: bool, what: &str, place: &str) -> (Option<f64>, String) {
    if hit {
        (Some(1.0), format!("{what} found {place}"))
    } else {
        (Some(0.0), format!("{what} not found {place}"))
    }
}

fn tokens_score(text: &str, page: &PageContent) -> (Option<f64>, String) {
    match containment(text, page) {
        Some((score, hit, total)) => (Some(score), format!("{hit} of {total} tokens found in page text")),
        None => (None, "value has no words to look for".into()),
    }
}

fn score_value(
    kind: ContentKind,
    property: &str,
    raw: &str,
    page: &PageContent,
    config: &ValidationConfig,
) -> (Option<f64>, String) {
    match kind {
        ContentKind::Url => match normalize_url(raw, page.base_url.as_ref()) {
            Some(url) => {
                found(page.urls.contains(&url) || page.image_urls.contains(&url), "URL", "among page links and images")
            }
            None => (None, "not an absolute http(s) URL".into()),
        },
        ContentKind::Date => match raw.trim().get(..10).and_then(crate::annotation::parse_iso_date) {
            Some(date) => found(page.dates.contains(&date), &format!("date {date}"), "in page text"),
            None => (None, "date could not be read".into()),
        },
        ContentKind::Time => (None, "times and durations are not checked".into()),
        ContentKind::Number | ContentKind::RatingValue => match normalize_number(raw, DecimalSeparator::Point) {
            Some(number) => found(page.numbers.contains(&number), &format!("number {number}"), "in page text"),
            None => (None, "number could not be read".into()),
        },
        ContentKind::Str => tokens_score(raw, page),
        ContentKind::Enumeration => tokens_score(&split_camel_case(strip_schema_prefix(raw.trim())), page),
        ContentKind::Boolean => {
            let Some(forms) = config.boolean_forms.get(property) else {
                return (None, format!("no surface forms configured for `{property}`"));
            };
            let forms = if is_true(raw) { &forms.when_true } else { &forms.when_false };
            let best = forms
                .iter()
                .filter_map(|form| containment(form, page).map(|(score, ..)| (score, form)))
                .max_by(|a, b| a.0.total_cmp(&b.0));
            match best {
                Some((score, form)) => (Some(score), format!("best surface form \"{form}\"")),
                None => (None, format!("no surface forms configured for `{property}` = {raw}")),
            }
        }
    }
}

fn mismatch_code(kind: ContentKind) -> ErrorCode {
    match kind {
        ContentKind::Url => ErrorCode::UrlMismatch,
        ContentKind::Date | ContentKind::Time | ContentKind::Number | ContentKind::RatingValue => {
            ErrorCode::DateMismatch
        }
        ContentKind::Str | ContentKind::Boolean | ContentKind::Enumeration => ErrorCode::ValueUnmatched,
    }
}

/// Scores every literal and external reference reachable in `graph`.
pub fn validate_annotation_against_page(
    graph: &AnnotationGraph,
    page: &PageContent,
    config: &ValidationConfig,
    vocab: &VocabularyGraph,
) -> ContentValidation {
    let mut values = Vec::new();
    let mut visited = HashSet::new();
    let mut stack: Vec<_> = graph.roots().iter().rev().copied().collect();
    while let Some(id) = stack.pop() {
        if !visited.insert(id) {
            continue;
        }
        let node = graph.node(id);
        let mut children = Vec::new();
        for (property, property_values) in &node.properties {
            for value in property_values {
                match graph.target_node(value) {
                    Some(child) => children.push(child),
                    None => values.push(consistency_of_value(property, value, page, config, vocab)),
                }
            }
        }
        stack.extend(children.into_iter().rev());
    }

    let mut entries: Vec<ReportEntry> = values
        .iter()
        .filter(|v| v.status == ConsistencyStatus::Unmatched)
        .map(|v| {
            ReportEntry::new(
                mismatch_code(v.kind),
                v.path.clone(),
                format!("score {:.3}: {}", v.score.unwrap_or(0.0), v.evidence),
            )
            .in_block(graph.block_index())
        })
        .collect();
    sort_entries(&mut entries);
    let overall = OverallScore::aggregate(&values);
    ContentValidation { entries, values, overall }
}
