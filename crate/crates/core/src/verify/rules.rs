use std::fmt;
use std::sync::Arc;

use chrono::{DateTime, NaiveDateTime};
use thiserror::Error;

use crate::annotation::{parse_iso_date, AnnotationGraph, AnnotationNode, LiteralType};

/// A rule violation: the property the finding is attached to (the node
/// itself when `None`) and a sentence describing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleViolation {
    pub property: Option<String>,
    pub description: String,
}

type RuleCheck = dyn Fn(&AnnotationGraph, &AnnotationNode) -> Option<RuleViolation> + Send + Sync;

/// A consistency check over nodes that are instances of `applicable_type`.
/// Checks must be side-effect free.
#[derive(Clone)]
pub struct SemanticRule {
    pub id: String,
    pub applicable_type: String,
    check: Arc<RuleCheck>,
}

impl SemanticRule {
    pub fn new<F>(id: impl Into<String>, applicable_type: impl Into<String>, check: F) -> Self
    where
        F: Fn(&AnnotationGraph, &AnnotationNode) -> Option<RuleViolation> + Send + Sync + 'static,
    {
        Self { id: id.into(), applicable_type: applicable_type.into(), check: Arc::new(check) }
    }

    pub fn check(&self, graph: &AnnotationGraph, node: &AnnotationNode) -> Option<RuleViolation> {
        (self.check)(graph, node)
    }
}

impl fmt::Debug for SemanticRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SemanticRule")
            .field("id", &self.id)
            .field("applicable_type", &self.applicable_type)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("a semantic rule with id `{0}` is already registered")]
pub struct DuplicateRuleId(pub String);

#[derive(Debug, Clone, Default)]
pub struct RuleRegistry {
    rules: Vec<SemanticRule>,
}

impl RuleRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Registry holding `event-dates` and `value-order`.
    pub fn with_builtin_rules() -> Self {
        let mut registry = Self::empty();
        registry.register(event_dates()).expect("builtin ids are unique");
        registry.register(value_order()).expect("builtin ids are unique");
        registry
    }

    pub fn register(&mut self, rule: SemanticRule) -> Result<(), DuplicateRuleId> {
        if self.rules.iter().any(|r| r.id == rule.id) {
            return Err(DuplicateRuleId(rule.id));
        }
        self.rules.push(rule);
        Ok(())
    }

    pub fn rules(&self) -> &[SemanticRule] {
        &self.rules
    }
}

fn single_literal<'a>(node: &'a AnnotationNode, property: &str) -> Option<(&'a str, LiteralType)> {
    node.values(property).first().and_then(|v| v.literal()).map(|(raw, dt)| (raw.trim(), dt))
}

enum Instant {
    Date(chrono::NaiveDate),
    Local(NaiveDateTime),
    Zoned(DateTime<chrono::FixedOffset>),
}

fn parse_instant(raw: &str, datatype: LiteralType) -> Option<Instant> {
    match datatype {
        LiteralType::Date => parse_iso_date(raw).map(Instant::Date),
        LiteralType::DateTime => {
            if let Ok(zoned) = DateTime::parse_from_rfc3339(raw) {
                return Some(Instant::Zoned(zoned));
            }
            for format in ["%Y-%m-%dT%H:%M:%S%.f%:z", "%Y-%m-%dT%H:%M%:z", "%Y-%m-%dT%H:%M:%S%z", "%Y-%m-%dT%H:%M%z"] {
                if let Ok(zoned) = DateTime::parse_from_str(raw, format) {
                    return Some(Instant::Zoned(zoned));
                }
            }
            let local = raw.trim_end_matches(['Z', 'z']);
            if local.len() != raw.len() {
                // `Z` suffix: UTC.
                return ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%dT%H:%M"]
                    .iter()
                    .find_map(|f| NaiveDateTime::parse_from_str(local, f).ok())
                    .map(|dt| Instant::Zoned(dt.and_utc().fixed_offset()));
            }
            ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%dT%H:%M"]
                .iter()
                .find_map(|f| NaiveDateTime::parse_from_str(raw, f).ok())
                .map(Instant::Local)
        }
        _ => None,
    }
}

/// `Event`: fires when `endDate` precedes `startDate` and both parse as the
/// same datatype.
pub fn event_dates() -> SemanticRule {
    SemanticRule::new("event-dates", "Event", |_, node| {
        let (start_raw, start_type) = single_literal(node, "startDate")?;
        let (end_raw, end_type) = single_literal(node, "endDate")?;
        if start_type != end_type {
            return None;
        }
        let ends_before = match (parse_instant(start_raw, start_type)?, parse_instant(end_raw, end_type)?) {
            (Instant::Date(s), Instant::Date(e)) => e < s,
            (Instant::Local(s), Instant::Local(e)) => e < s,
            (Instant::Zoned(s), Instant::Zoned(e)) => e < s,
            _ => return None,
        };
        ends_before.then(|| RuleViolation {
            property: Some("endDate".into()),
            description: format!("endDate {end_raw} is earlier than startDate {start_raw}"),
        })
    })
}

/// Any node with `minValue` and `maxValue`: fires when min exceeds max.
pub fn value_order() -> SemanticRule {
    SemanticRule::new("value-order", "Thing", |_, node| {
        let number = |property: &str| {
            let (raw, datatype) = single_literal(node, property)?;
            matches!(datatype, LiteralType::Integer | LiteralType::Float).then(|| raw.parse::<f64>().ok()).flatten()
        };
        let min = number("minValue")?;
        let max = number("maxValue")?;
        (min > max).then(|| RuleViolation {
            property: Some("maxValue".into()),
            description: format!("maxValue {max} is smaller than minValue {min}"),
        })
    })
}
