//! Conformance of annotation graphs with the schema.org vocabulary.
//!
//! | code | check |
//! |------|-------|
//! | E201 | listed type is not a class or enumeration |
//! | E202 | property is not a vocabulary property |
//! | E203 | property's domain covers none of the node's types |
//! | E204 | value conforms to none of the property's ranges |
//! | E205 | free text where only non-text datatypes are admitted |
//! | E206 | empty literal, or entity without properties |
//! | E207 | byte-identical value repeated under one property |
//! | E208 | a registered [`SemanticRule`] fires |
//! | E209 | nested entity without a type (informational) |

mod rules;

use std::collections::HashSet;

pub use rules::{event_dates, value_order, DuplicateRuleId, RuleRegistry, RuleViolation, SemanticRule};

use crate::annotation::{AnnotationGraph, AnnotationNode, LiteralType, NodeId, PropertyValue, ValueKind};
use crate::report::{sort_entries, ErrorCode, ReportEntry, Severity};
use crate::terms::strip_schema_prefix;
use crate::vocab::{PropertyDef, TermKind, VocabularyGraph};

/// Outcome of [`check_literal_against_ranges`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiteralCheck {
    pub conforms: bool,
    pub matched_range: Option<String>,
}

/// Whether a literal fits one of `ranges`: its inferred datatype (after
/// widening) equals a datatype range, or the literal names a member of an
/// enumeration range. Ranges are tried in the given order.
pub fn check_literal_against_ranges<'r>(
    raw: &str,
    datatype: LiteralType,
    ranges: impl IntoIterator<Item = &'r str>,
    vocab: &VocabularyGraph,
) -> LiteralCheck {
    let inferred = datatype.datatype_name();
    let member = strip_schema_prefix(raw.trim());
    for range in ranges {
        let by_datatype =
            vocab.is_datatype(range) && inferred.is_some_and(|dt| vocab.datatype_accepts_literal(range, dt));
        if by_datatype || (!member.is_empty() && vocab.is_member_of(member, range)) {
            return LiteralCheck { conforms: true, matched_range: Some(range.to_owned()) };
        }
    }
    LiteralCheck { conforms: false, matched_range: None }
}

/// Schema.org verification with a configurable rule set.
#[derive(Debug, Clone)]
pub struct SchemaOrgVerifier<'v> {
    vocab: &'v VocabularyGraph,
    rules: RuleRegistry,
    strict: bool,
}

/// Verifies a graph with the built-in rules.
pub fn verify_schema_org(graph: &AnnotationGraph, vocab: &VocabularyGraph, strict: bool) -> Vec<ReportEntry> {
    SchemaOrgVerifier::new(vocab).strict(strict).verify(graph)
}

fn is_blank(raw: &str) -> bool {
    raw.trim().is_empty()
}

impl<'v> SchemaOrgVerifier<'v> {
    pub fn new(vocab: &'v VocabularyGraph) -> Self {
        Self::with_rules(vocab, RuleRegistry::with_builtin_rules())
    }

    pub fn with_rules(vocab: &'v VocabularyGraph, rules: RuleRegistry) -> Self {
        Self { vocab, rules, strict: false }
    }

    /// Elevates E203 and E204 to errors.
    pub fn strict(mut self, strict: bool) -> Self {
        self.strict = strict;
        self
    }

    pub fn register_semantic_rule(&mut self, rule: SemanticRule) -> Result<(), DuplicateRuleId> {
        self.rules.register(rule)
    }

    pub fn verify(&self, graph: &AnnotationGraph) -> Vec<ReportEntry> {
        let mut entries = Vec::new();
        let mut visited = HashSet::new();
        let mut stack: Vec<NodeId> = graph.roots().iter().rev().copied().collect();
        while let Some(id) = stack.pop() {
            if !visited.insert(id) {
                continue;
            }
            let node = graph.node(id);
            self.check_node(graph, node, &mut entries);
            for (_, values) in node.properties.iter().rev() {
                for value in values.iter().rev() {
                    if let Some(child) = graph.target_node(value) {
                        if !visited.contains(&child) {
                            stack.push(child);
                        }
                    }
                }
            }
        }
        for entry in &mut entries {
            entry.block = Some(graph.block_index());
        }
        sort_entries(&mut entries);
        entries
    }

    fn expectation_severity(&self, code: ErrorCode) -> Severity {
        if self.strict {
            Severity::Error
        } else {
            code.default_severity()
        }
    }

    /// Node types that resolve to classes or enumerations.
    fn known_types<'n>(&self, node: &'n AnnotationNode) -> Vec<&'n str> {
        node.types
            .iter()
            .map(String::as_str)
            .filter(|t| matches!(self.vocab.lookup_term(t), TermKind::Class | TermKind::Enumeration))
            .collect()
    }

    fn check_node(&self, graph: &AnnotationGraph, node: &AnnotationNode, out: &mut Vec<ReportEntry>) {
        for ty in &node.types {
            if !matches!(self.vocab.lookup_term(ty), TermKind::Class | TermKind::Enumeration) {
                out.push(ReportEntry::new(
                    ErrorCode::UnknownType,
                    node.path.clone(),
                    format!("`{ty}` is not a schema.org type"),
                ));
            }
        }
        if node.properties.is_empty() {
            out.push(ReportEntry::new(ErrorCode::EmptyValue, node.path.clone(), "entity has no properties"));
        }

        let types = self.known_types(node);
        for (name, values) in &node.properties {
            let property_path = node.path.property(name);
            let Some(def) = self.vocab.property(name).filter(|_| self.vocab.lookup_term(name) == TermKind::Property)
            else {
                out.push(ReportEntry::new(
                    ErrorCode::UnknownProperty,
                    property_path,
                    format!("`{name}` is not a schema.org property"),
                ));
                self.check_values_generic(graph, values, out);
                continue;
            };

            if !types.is_empty() && !types.iter().any(|t| self.vocab.property_applies_to(name, t).unwrap_or(false)) {
                out.push(
                    ReportEntry::new(
                        ErrorCode::DomainViolation,
                        property_path.clone(),
                        format!("`{name}` is not expected on {}", types.join(", ")),
                    )
                    .with_severity(self.expectation_severity(ErrorCode::DomainViolation)),
                );
            }

            for value in values {
                self.check_range(graph, def, value, out);
            }
            self.check_values_generic(graph, values, out);
        }

        for rule in self.rules.rules() {
            let applies = types.iter().any(|t| self.vocab.is_subclass_of(t, &rule.applicable_type).unwrap_or(false));
            if !applies {
                continue;
            }
            if let Some(violation) = rule.check(graph, node) {
                let path = match &violation.property {
                    Some(property) => node.path.property(property),
                    None => node.path.clone(),
                };
                out.push(ReportEntry::new(
                    ErrorCode::SemanticInconsistency,
                    path,
                    format!("[{}] {}", rule.id, violation.description),
                ));
            }
        }
    }

    /// Checks independent of the property definition: empty literals,
    /// duplicates, untyped entities.
    fn check_values_generic(&self, graph: &AnnotationGraph, values: &[PropertyValue], out: &mut Vec<ReportEntry>) {
        let mut seen: HashSet<String> = HashSet::new();
        for value in values {
            match &value.kind {
                ValueKind::Literal { raw, .. } if is_blank(raw) => {
                    out.push(ReportEntry::new(ErrorCode::EmptyValue, value.path.clone(), "literal value is empty"))
                }
                ValueKind::Entity(id) if graph.node(*id).types.is_empty() => out.push(ReportEntry::new(
                    ErrorCode::UntypedEntity,
                    value.path.clone(),
                    "nested entity has no @type; its properties are not checked against domains and ranges",
                )),
                _ => {}
            }
            let identity = match &value.kind {
                ValueKind::Literal { raw, .. } => Some(format!("literal:{raw}")),
                ValueKind::Reference(iri) => Some(format!("ref:{iri}")),
                ValueKind::Entity(id) => graph.node(*id).identifier.as_ref().map(|iri| format!("ref:{iri}")),
            };
            if let Some(identity) = identity {
                if !seen.insert(identity) {
                    out.push(ReportEntry::new(
                        ErrorCode::DuplicateValue,
                        value.path.clone(),
                        "value repeats an earlier value of the same property",
                    ));
                }
            }
        }
    }

    fn range_violation(&self, value: &PropertyValue, description: String) -> ReportEntry {
        ReportEntry::new(ErrorCode::RangeViolation, value.path.clone(), description)
            .with_severity(self.expectation_severity(ErrorCode::RangeViolation))
    }

    fn ranges_text(def: &PropertyDef) -> String {
        def.range_includes.iter().map(String::as_str).collect::<Vec<_>>().join(", ")
    }

    fn check_range(
        &self,
        graph: &AnnotationGraph,
        def: &PropertyDef,
        value: &PropertyValue,
        out: &mut Vec<ReportEntry>,
    ) {
        let ranges = &def.range_includes;
        let has_class_range = ranges.iter().any(|r| self.vocab.is_class(r));
        match &value.kind {
            ValueKind::Literal { raw, datatype } => {
                if is_blank(raw) {
                    return;
                }
                let check = check_literal_against_ranges(raw, *datatype, ranges.iter().map(String::as_str), self.vocab);
                if check.conforms {
                    return;
                }
                let only_non_text_datatypes = !has_class_range && ranges.iter().all(|r| !self.vocab.is_textual(r));
                if *datatype == LiteralType::Text && only_non_text_datatypes {
                    out.push(ReportEntry::new(
                        ErrorCode::MalformedLiteral,
                        value.path.clone(),
                        format!("`{raw}` is not a valid {}", Self::ranges_text(def)),
                    ));
                } else {
                    out.push(self.range_violation(
                        value,
                        format!(
                            "{datatype} value `{raw}` is outside the range of `{}` ({})",
                            def.name,
                            Self::ranges_text(def)
                        ),
                    ));
                }
            }
            ValueKind::Entity(_) | ValueKind::Reference(_) => {
                let target = graph.target_node(value).map(|id| graph.node(id));
                match target {
                    Some(node) if !node.types.is_empty() => {
                        let types = self.known_types(node);
                        if types.is_empty() {
                            // Unknown types are reported as E201 on the node.
                            return;
                        }
                        let conforms =
                            types.iter().any(|t| self.vocab.value_conforms_to_range(&def.name, t).unwrap_or(false));
                        if !conforms {
                            out.push(self.range_violation(
                                value,
                                format!(
                                    "{} is outside the range of `{}` ({})",
                                    types.join(", "),
                                    def.name,
                                    Self::ranges_text(def)
                                ),
                            ));
                        }
                    }
                    Some(_) => {
                        if !has_class_range {
                            out.push(self.range_violation(
                                value,
                                format!(
                                    "untyped entity cannot satisfy the range of `{}` ({})",
                                    def.name,
                                    Self::ranges_text(def)
                                ),
                            ));
                        }
                    }
                    None => {
                        let ValueKind::Reference(iri) = &value.kind else {
                            return;
                        };
                        if ranges.iter().any(|r| self.vocab.is_member_of(iri, r)) {
                            return;
                        }
                        // An external resource may have any type; only a
                        // datatype-only range rules it out, unless it accepts URLs.
                        let accepts_iri =
                            has_class_range || ranges.iter().any(|r| self.vocab.datatype_accepts_literal(r, "URL"));
                        if !accepts_iri {
                            out.push(self.range_violation(
                                value,
                                format!(
                                    "reference `{iri}` is outside the range of `{}` ({})",
                                    def.name,
                                    Self::ranges_text(def)
                                ),
                            ));
                        }
                    }
                }
            }
        }
    }
}
