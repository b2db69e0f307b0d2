use std::collections::HashMap;

use super::{DomainSpecification, PropertyNode, RangeNode, TypeNode};
use crate::annotation::{AnnotationGraph, AnnotationPath, NodeId, PropertyValue, ValueKind};
use crate::report::{sort_entries, ErrorCode, ReportEntry};
use crate::vocab::VocabularyGraph;

fn has_type_within(vocab: &VocabularyGraph, types: &[String], classes: &[String]) -> bool {
    types.iter().any(|t| classes.iter().any(|c| vocab.is_subclass_of(t, c).unwrap_or(false)))
}

/// Indices of the roots typed as one of the DS target types or a subclass.
pub fn match_target(ds: &DomainSpecification, graph: &AnnotationGraph, vocab: &VocabularyGraph) -> Vec<usize> {
    graph
        .roots()
        .iter()
        .enumerate()
        .filter(|(_, id)| has_type_within(vocab, &graph.node(**id).types, &ds.root.target_types))
        .map(|(i, _)| i)
        .collect()
}

/// Checks every matching root against the DS. Properties the DS does not
/// mention are ignored.
pub fn verify_against_ds(
    graph: &AnnotationGraph,
    ds: &DomainSpecification,
    vocab: &VocabularyGraph,
) -> Vec<ReportEntry> {
    let matched = match_target(ds, graph, vocab);
    let mut entries = Vec::new();
    if matched.is_empty() {
        entries.push(ReportEntry::new(
            ErrorCode::TargetMismatch,
            AnnotationPath::block(),
            format!(
                "no root is typed {} (or a subclass) as required by `{}`",
                ds.root.target_types.join(" or "),
                ds.name
            ),
        ));
    }
    let mut checker = Checker { graph, vocab, memo: HashMap::new() };
    for index in matched {
        entries.extend(checker.node(graph.roots()[index], &ds.root));
    }
    for entry in &mut entries {
        entry.block = Some(graph.block_index());
    }
    sort_entries(&mut entries);
    entries.dedup();
    entries
}

struct Checker<'a> {
    graph: &'a AnnotationGraph,
    vocab: &'a VocabularyGraph,
    /// Findings per (node, type node); `None` while the pair is being checked,
    /// so cycles through identifiers are treated as compliant.
    memo: HashMap<(NodeId, *const TypeNode), Option<Vec<ReportEntry>>>,
}

impl<'a> Checker<'a> {
    fn node(&mut self, id: NodeId, spec: &TypeNode) -> Vec<ReportEntry> {
        let key = (id, spec as *const TypeNode);
        match self.memo.get(&key) {
            Some(Some(done)) => return done.clone(),
            Some(None) => return Vec::new(),
            None => {}
        }
        self.memo.insert(key, None);

        let node = self.graph.node(id);
        let mut out = Vec::new();
        for property in &spec.properties {
            let values = node.values(&property.name);
            let path = node.path.property(&property.name);
            if values.is_empty() {
                if !property.is_optional {
                    out.push(ReportEntry::new(
                        ErrorCode::MissingMandatoryProperty,
                        path,
                        format!("mandatory property `{}` is missing", property.name),
                    ));
                }
                continue;
            }
            if values.len() > 1 && !property.multiple_values_allowed {
                out.push(ReportEntry::new(
                    ErrorCode::CardinalityViolation,
                    path,
                    format!("`{}` allows one value, found {}", property.name, values.len()),
                ));
            }
            for value in values {
                out.extend(self.value(value, property));
            }
        }
        self.memo.insert(key, Some(out.clone()));
        out
    }

    fn value(&mut self, value: &PropertyValue, property: &PropertyNode) -> Vec<ReportEntry> {
        let vocab = self.vocab;
        let target = self.graph.target_node(value);
        let types: &[String] = target.map_or(&[], |id| &self.graph.node(id).types);
        let mut nested: Vec<&TypeNode> = Vec::new();

        for range in &property.ranges {
            let satisfied = match range {
                RangeNode::Datatype(datatype) => match &value.kind {
                    ValueKind::Literal { datatype: inferred, .. } => {
                        inferred.datatype_name().is_some_and(|name| vocab.datatype_accepts_literal(datatype, name))
                    }
                    // An IRI that names nothing in the graph is just a URL.
                    ValueKind::Reference(_) if target.is_none() => vocab.datatype_accepts_literal(datatype, "URL"),
                    _ => false,
                },
                RangeNode::Enumeration(enumeration) => match &value.kind {
                    ValueKind::Literal { raw, .. } => vocab.is_member_of(raw.trim(), enumeration),
                    ValueKind::Reference(iri) if target.is_none() => vocab.is_member_of(iri, enumeration),
                    _ => has_type_within(vocab, types, std::slice::from_ref(enumeration)),
                },
                RangeNode::Type { class, node } => {
                    if has_type_within(vocab, types, std::slice::from_ref(class)) {
                        match node {
                            None => true,
                            Some(spec) => {
                                nested.push(spec);
                                false
                            }
                        }
                    } else {
                        false
                    }
                }
            };
            if satisfied {
                return Vec::new();
            }
        }

        let Some(target) = target.filter(|_| !nested.is_empty()) else {
            return vec![ReportEntry::new(
                ErrorCode::RangeNotPermitted,
                value.path.clone(),
                format!("value is not permitted for `{}`", property.name),
            )];
        };
        let mut first_failure = None;
        for spec in nested {
            let findings = self.node(target, spec);
            if findings.is_empty() {
                return Vec::new();
            }
            first_failure.get_or_insert(findings);
        }
        let mut findings = first_failure.unwrap_or_default();
        let count = findings.len();
        findings.push(ReportEntry::new(
            ErrorCode::NestedNonCompliance,
            value.path.clone(),
            format!(
                "nested value does not satisfy the constraints for `{}` ({count} finding{})",
                property.name,
                if count == 1 { "" } else { "s" }
            ),
        ));
        findings
    }
}
