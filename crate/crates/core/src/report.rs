//! Diagnostics: the error-code catalog, report entries, and the machine and
//! human renderings of a verification report.
//!
//! The machine form is canonical JSON: fixed key order, two-space
//! indentation, trailing newline. Equal reports serialize to identical bytes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::annotation::AnnotationPath;
use crate::content::ContentScore;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
    Info,
}

impl Severity {
    pub fn label(self) -> &'static str {
        match self {
            Severity::Error => "ERROR",
            Severity::Warning => "WARNING",
            Severity::Info => "INFO",
        }
    }

    /// Rank for threshold comparisons; higher is more severe.
    pub fn rank(self) -> u8 {
        match self {
            Severity::Error => 2,
            Severity::Warning => 1,
            Severity::Info => 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Source {
    Parse,
    SchemaOrg,
    DomainSpec,
    Content,
}

macro_rules! catalog {
    ($($variant:ident => ($code:literal, $title:literal, $severity:ident, $source:ident)),+ $(,)?) => {
        /// Every diagnostic the tool can emit.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum ErrorCode {
            $($variant),+
        }

        impl ErrorCode {
            pub const ALL: &'static [ErrorCode] = &[$(ErrorCode::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(ErrorCode::$variant => $code),+
                }
            }

            pub fn title(self) -> &'static str {
                match self {
                    $(ErrorCode::$variant => $title),+
                }
            }

            pub fn default_severity(self) -> Severity {
                match self {
                    $(ErrorCode::$variant => Severity::$severity),+
                }
            }

            pub fn source(self) -> Source {
                match self {
                    $(ErrorCode::$variant => Source::$source),+
                }
            }
        }

        impl FromStr for ErrorCode {
            type Err = UnknownCode;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($code => Ok(ErrorCode::$variant),)+
                    other => Err(UnknownCode(other.to_owned())),
                }
            }
        }
    };
}

catalog! {
    InvalidSyntax => ("E101", "Invalid syntax", Error, Parse),
    EmptyAnnotation => ("E102", "Empty annotation", Error, Parse),
    UnsupportedConstruct => ("E103", "Unsupported construct", Warning, Parse),
    UnknownType => ("E201", "Unknown type", Error, SchemaOrg),
    UnknownProperty => ("E202", "Unknown property", Error, SchemaOrg),
    DomainViolation => ("E203", "Domain violation", Warning, SchemaOrg),
    RangeViolation => ("E204", "Range violation", Warning, SchemaOrg),
    MalformedLiteral => ("E205", "Malformed literal", Warning, SchemaOrg),
    EmptyValue => ("E206", "Empty value", Warning, SchemaOrg),
    DuplicateValue => ("E207", "Duplicate value", Info, SchemaOrg),
    SemanticInconsistency => ("E208", "Semantic inconsistency", Error, SchemaOrg),
    UntypedEntity => ("E209", "Untyped entity", Info, SchemaOrg),
    TargetMismatch => ("E301", "Target mismatch", Error, DomainSpec),
    MissingMandatoryProperty => ("E302", "Missing mandatory property", Error, DomainSpec),
    CardinalityViolation => ("E303", "Cardinality violation", Error, DomainSpec),
    RangeNotPermitted => ("E304", "Range not permitted", Error, DomainSpec),
    NestedNonCompliance => ("E305", "Nested non-compliance", Error, DomainSpec),
    ValueUnmatched => ("E401", "Value not found on page", Warning, Content),
    UrlMismatch => ("E402", "URL not found on page", Warning, Content),
    DateMismatch => ("E403", "Date or number not found on page", Warning, Content),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown error code `{0}`")]
pub struct UnknownCode(pub String);

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for ErrorCode {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for ErrorCode {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReportEntry {
    pub code: ErrorCode,
    pub title: String,
    pub severity: Severity,
    pub path: AnnotationPath,
    pub description: String,
    pub source: Source,
    /// Annotation block the entry refers to, when the report spans a page.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block: Option<usize>,
}

impl ReportEntry {
    /// Builds an entry with the catalog's title, severity and source.
    pub fn new(code: ErrorCode, path: AnnotationPath, description: impl Into<String>) -> Self {
        Self {
            code,
            title: code.title().to_owned(),
            severity: code.default_severity(),
            path,
            description: description.into(),
            source: code.source(),
            block: None,
        }
    }

    pub fn with_severity(mut self, severity: Severity) -> Self {
        self.severity = severity;
        self
    }

    pub fn in_block(mut self, block: usize) -> Self {
        self.block = Some(block);
        self
    }

    fn sort_key(&self) -> (Option<usize>, &AnnotationPath, ErrorCode) {
        (self.block, &self.path, self.code)
    }
}

/// Orders entries by block, then path, then code. The sort is stable, so
/// identical keys keep their relative order.
pub fn sort_entries(entries: &mut [ReportEntry]) {
    entries.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub error: usize,
    pub warning: usize,
    pub info: usize,
}

impl Summary {
    pub fn of(entries: &[ReportEntry]) -> Self {
        entries.iter().fold(Self::default(), |mut acc, e| {
            match e.severity {
                Severity::Error => acc.error += 1,
                Severity::Warning => acc.warning += 1,
                Severity::Info => acc.info += 1,
            }
            acc
        })
    }

    pub fn count(&self, severity: Severity) -> usize {
        match severity {
            Severity::Error => self.error,
            Severity::Warning => self.warning,
            Severity::Info => self.info,
        }
    }
}

/// Metadata carried by a report besides its entries.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReportMetadata {
    pub snapshot_id: String,
    pub ds_name: Option<String>,
    pub content_score: Option<ContentScore>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationReport {
    pub target: String,
    pub snapshot_id: String,
    pub ds_name: Option<String>,
    pub summary: Summary,
    pub entries: Vec<ReportEntry>,
    pub content_score: Option<ContentScore>,
}

impl VerificationReport {
    /// Highest severity present, if any.
    pub fn max_severity(&self) -> Option<Severity> {
        self.entries.iter().map(|e| e.severity).max_by_key(|s| s.rank())
    }

    pub fn has_at_least(&self, severity: Severity) -> bool {
        self.entries.iter().any(|e| e.severity.rank() >= severity.rank())
    }
}

/// Concatenates entry lists, orders them, and recomputes the summary.
/// Duplicate entries are kept.
pub fn merge_reports(
    parts: impl IntoIterator<Item = Vec<ReportEntry>>,
    target: impl Into<String>,
    metadata: ReportMetadata,
) -> VerificationReport {
    let mut entries: Vec<ReportEntry> = parts.into_iter().flatten().collect();
    sort_entries(&mut entries);
    VerificationReport {
        target: target.into(),
        snapshot_id: metadata.snapshot_id,
        ds_name: metadata.ds_name,
        summary: Summary::of(&entries),
        entries,
        content_score: metadata.content_score,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Machine,
    Human,
}

pub fn serialize_report(report: &VerificationReport, format: ReportFormat) -> Vec<u8> {
    match format {
        ReportFormat::Machine => {
            let mut out = serde_json::to_vec_pretty(report).expect("report serialization is infallible");
            out.push(b'\n');
            out
        }
        ReportFormat::Human => render_human(report).into_bytes(),
    }
}

#[derive(Debug, Error)]
#[error("malformed machine report: {0}")]
pub struct ReportParseError(#[from] serde_json::Error);

pub fn parse_machine_report(bytes: &[u8]) -> Result<VerificationReport, ReportParseError> {
    Ok(serde_json::from_slice(bytes)?)
}

fn render_human(report: &VerificationReport) -> String {
    use std::fmt::Write;

    let mut out = String::new();
    let multi_block =
        report.entries.iter().filter_map(|e| e.block).any(|b| Some(b) != report.entries.iter().find_map(|e| e.block));
    let mut current_block = None;
    for entry in &report.entries {
        if multi_block && entry.block != current_block {
            current_block = entry.block;
            match entry.block {
                Some(b) => writeln!(out, "# block {b}").unwrap(),
                None => writeln!(out, "# page").unwrap(),
            }
        }
        writeln!(
            out,
            "{} {} {}: {} — {}",
            entry.severity.label(),
            entry.code,
            entry.path,
            entry.title,
            entry.description
        )
        .unwrap();
    }
    let s = &report.summary;
    writeln!(out, "{}: {} error(s), {} warning(s), {} info", report.target, s.error, s.warning, s.info).unwrap();
    if let Some(content) = &report.content_score {
        match content.overall.score {
            Some(score) => writeln!(
                out,
                "content score: {score:.3} ({} of {} checked values matched, {} unverifiable)",
                content.overall.matched, content.overall.checked, content.overall.unverifiable
            )
            .unwrap(),
            None => writeln!(
                out,
                "content score: undefined (no checkable values, {} unverifiable)",
                content.overall.unverifiable
            )
            .unwrap(),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(s: &str) -> AnnotationPath {
        s.parse().unwrap()
    }

    fn meta() -> ReportMetadata {
        ReportMetadata { snapshot_id: "snap".into(), ..Default::default() }
    }

    #[test]
    fn catalog_is_total() {
        for code in ErrorCode::ALL {
            assert_eq!(code.as_str().parse::<ErrorCode>().unwrap(), *code);
            assert!(!code.title().is_empty());
            let _ = code.default_severity();
        }
        assert_eq!(ErrorCode::ALL.first().unwrap().as_str(), "E101");
        assert_eq!(ErrorCode::ALL.last().unwrap().as_str(), "E403");
    }

    #[test]
    fn catalog_severities() {
        use ErrorCode::*;
        assert_eq!(InvalidSyntax.default_severity(), Severity::Error);
        assert_eq!(UnsupportedConstruct.default_severity(), Severity::Warning);
        assert_eq!(DomainViolation.default_severity(), Severity::Warning);
        assert_eq!(DuplicateValue.default_severity(), Severity::Info);
        assert_eq!(SemanticInconsistency.default_severity(), Severity::Error);
        for code in
            [TargetMismatch, MissingMandatoryProperty, CardinalityViolation, RangeNotPermitted, NestedNonCompliance]
        {
            assert_eq!(code.default_severity(), Severity::Error);
            assert_eq!(code.source(), Source::DomainSpec);
        }
        for code in [ValueUnmatched, UrlMismatch, DateMismatch] {
            assert_eq!(code.default_severity(), Severity::Warning);
        }
    }

    #[test]
    fn empty_merge() {
        let report = merge_reports(Vec::<Vec<ReportEntry>>::new(), "t", meta());
        assert_eq!(report.summary, Summary::default());
        let machine = String::from_utf8(serialize_report(&report, ReportFormat::Machine)).unwrap();
        assert!(machine.contains("\"entries\": []"), "{machine}");
    }

    #[test]
    fn merge_counts_and_keeps_duplicates() {
        let e = ReportEntry::new(ErrorCode::MissingMandatoryProperty, path("$0.name"), "x");
        let w = ReportEntry::new(ErrorCode::DomainViolation, path("$0.foo"), "y");
        let report = merge_reports([vec![e.clone()], vec![w]], "t", meta());
        assert_eq!(report.summary, Summary { error: 1, warning: 1, info: 0 });

        let report = merge_reports([vec![e.clone()], vec![e.clone()]], "t", meta());
        assert_eq!(report.entries.len(), 2);
    }

    #[test]
    fn merge_orders_by_path_then_code() {
        let a = ReportEntry::new(ErrorCode::EmptyValue, path("$0.name"), "");
        let b = ReportEntry::new(ErrorCode::UnknownType, path("$0"), "");
        let c = ReportEntry::new(ErrorCode::DomainViolation, path("$0.name"), "");
        let d = ReportEntry::new(ErrorCode::UnknownType, path("$10"), "");
        let e = ReportEntry::new(ErrorCode::UnknownType, path("$2"), "");
        let report = merge_reports([vec![a, d, e], vec![b, c]], "t", meta());
        let order: Vec<String> = report.entries.iter().map(|e| format!("{} {}", e.path, e.code)).collect();
        assert_eq!(order, ["$0 E201", "$0.name E203", "$0.name E206", "$2 E201", "$10 E201"]);
    }

    #[test]
    fn human_line_format() {
        let e = ReportEntry::new(ErrorCode::MissingMandatoryProperty, path("$0.name"), "`name` is required");
        let report = merge_reports([vec![e]], "event.json", meta());
        let human = String::from_utf8(serialize_report(&report, ReportFormat::Human)).unwrap();
        let first = human.lines().next().unwrap();
        assert!(first.starts_with("ERROR E302 $0.name:"), "{first}");
        assert_eq!(first, "ERROR E302 $0.name: Missing mandatory property — `name` is required");
    }

    #[test]
    fn machine_round_trip_is_byte_stable() {
        let entries = vec![
            ReportEntry::new(ErrorCode::RangeViolation, path("$0.location[1]"), "bad").with_severity(Severity::Error),
            ReportEntry::new(ErrorCode::InvalidSyntax, AnnotationPath::block(), "oops").in_block(3),
        ];
        let report = merge_reports([entries], "t", meta());
        let bytes = serialize_report(&report, ReportFormat::Machine);
        let parsed = parse_machine_report(&bytes).unwrap();
        assert_eq!(parsed, report);
        assert_eq!(serialize_report(&parsed, ReportFormat::Machine), bytes);
    }

    #[test]
    fn unknown_code_rejected() {
        let bad = br#"{"target":"t","snapshotId":"s","dsName":null,"summary":{"error":0,"warning":0,"info":0},
            "entries":[{"code":"E999","title":"x","severity":"error","path":"$0","description":"","source":"parse"}],
            "contentScore":null}"#;
        assert!(parse_machine_report(bad).is_err());
    }
}
