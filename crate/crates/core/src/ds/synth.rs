use serde_json::{json, Map, Value};
use thiserror::Error;

use super::{DomainSpecification, PropertyNode, RangeNode, TypeNode};
use crate::annotation::classify_literal;
use crate::vocab::VocabularyGraph;

/// Sample literals, most specific first.
const SAMPLES: [&str; 9] =
    ["2020-01-01", "2020-01-01T10:00:00", "10:00:00", "PT1H", "true", "1", "1.5", "https://example.org/", "example"];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("no value can be synthesized for property `{0}`")]
pub struct SynthesisError(pub String);

/// Builds a JSON-LD instance that complies with `ds`: one value for every
/// mandatory property (and every optional one when `include_optional`),
/// drawn from the first range that admits a sample.
pub fn synthesize_instance(
    ds: &DomainSpecification,
    vocab: &VocabularyGraph,
    include_optional: bool,
) -> Result<Value, SynthesisError> {
    let mut root = node(&ds.root, &ds.root.target_types[0], vocab, include_optional)?;
    let mut with_context = Map::new();
    with_context.insert("@context".into(), json!("https://schema.org"));
    with_context.append(&mut root);
    Ok(Value::Object(with_context))
}

fn node(
    spec: &TypeNode,
    ty: &str,
    vocab: &VocabularyGraph,
    include_optional: bool,
) -> Result<Map<String, Value>, SynthesisError> {
    let mut out = Map::new();
    out.insert("@type".into(), json!(ty));
    for property in &spec.properties {
        if property.is_optional && !include_optional {
            continue;
        }
        out.insert(property.name.clone(), value(property, vocab, include_optional)?);
    }
    Ok(out)
}

fn value(property: &PropertyNode, vocab: &VocabularyGraph, include_optional: bool) -> Result<Value, SynthesisError> {
    for range in &property.ranges {
        match range {
            RangeNode::Datatype(datatype) => {
                let sample = SAMPLES.iter().find(|s| {
                    classify_literal(s)
                        .datatype_name()
                        .is_some_and(|name| vocab.datatype_accepts_literal(datatype, name))
                });
                if let Some(sample) = sample {
                    return Ok(json!(sample));
                }
            }
            RangeNode::Enumeration(enumeration) => {
                let member = vocab
                    .enumeration_members()
                    .iter()
                    .filter(|(owner, _)| vocab.is_subclass_of(owner, enumeration).unwrap_or(false))
                    .find_map(|(_, members)| members.iter().next());
                if let Some(member) = member {
                    return Ok(json!(format!("https://schema.org/{member}")));
                }
            }
            RangeNode::Type { class, node: None } => return Ok(json!({ "@type": class })),
            RangeNode::Type { node: Some(spec), .. } => {
                return Ok(Value::Object(node(spec, &spec.target_types[0], vocab, include_optional)?));
            }
        }
    }
    Err(SynthesisError(property.name.clone()))
}
