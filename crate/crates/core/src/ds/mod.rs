//! Domain Specifications: recursive constraint trees over schema.org types,
//! properties and ranges.
//!
//! A document looks like
//!
//! ```json
//! {
//!   "name": "Event",
//!   "dsVersion": "1.0",
//!   "root": {
//!     "targetTypes": ["Event"],
//!     "properties": [
//!       { "name": "name", "ranges": [{ "datatype": "Text" }] },
//!       { "name": "location", "isOptional": true, "ranges": [
//!           { "type": "Place", "node": { "targetTypes": ["Place"], "properties": [] } }
//!       ] },
//!       { "name": "eventStatus", "isOptional": true,
//!         "ranges": [{ "enumeration": "EventStatusType" }] }
//!     ]
//!   }
//! }
//! ```
//!
//! `isOptional` and `multipleValuesAllowed` default to `false`.

mod synth;
mod verify;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::vocab::VocabularyGraph;

pub use synth::{synthesize_instance, SynthesisError};
pub use verify::{match_target, verify_against_ds};

/// The only major format version understood.
pub const DS_FORMAT_MAJOR: &str = "1";

fn default_version() -> String {
    "1.0".into()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct DomainSpecification {
    pub name: String,
    #[serde(default = "default_version")]
    pub ds_version: String,
    pub root: TypeNode,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct TypeNode {
    pub target_types: Vec<String>,
    #[serde(default)]
    pub properties: Vec<PropertyNode>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct PropertyNode {
    pub name: String,
    #[serde(default)]
    pub is_optional: bool,
    #[serde(default)]
    pub multiple_values_allowed: bool,
    pub ranges: Vec<RangeNode>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawRange", into = "RawRange")]
pub enum RangeNode {
    Datatype(String),
    Type { class: String, node: Option<TypeNode> },
    Enumeration(String),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRange {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    datatype: Option<String>,
    #[serde(default, rename = "type", skip_serializing_if = "Option::is_none")]
    class: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    node: Option<TypeNode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    enumeration: Option<String>,
}

impl TryFrom<RawRange> for RangeNode {
    type Error = String;

    fn try_from(raw: RawRange) -> Result<Self, String> {
        match raw {
            RawRange { datatype: Some(d), class: None, node: None, enumeration: None } => Ok(RangeNode::Datatype(d)),
            RawRange { datatype: None, class: Some(class), node, enumeration: None } => {
                Ok(RangeNode::Type { class, node })
            }
            RawRange { datatype: None, class: None, node: None, enumeration: Some(e) } => Ok(RangeNode::Enumeration(e)),
            RawRange { node: Some(_), class: None, .. } => Err("a range `node` requires a `type`".into()),
            _ => Err("a range names exactly one of `datatype`, `type` or `enumeration`".into()),
        }
    }
}

impl From<RangeNode> for RawRange {
    fn from(range: RangeNode) -> Self {
        let mut raw = RawRange { datatype: None, class: None, node: None, enumeration: None };
        match range {
            RangeNode::Datatype(d) => raw.datatype = Some(d),
            RangeNode::Type { class, node } => {
                raw.class = Some(class);
                raw.node = node;
            }
            RangeNode::Enumeration(e) => raw.enumeration = Some(e),
        }
        raw
    }
}

#[derive(Debug, Error)]
#[error("malformed domain specification: {0}")]
pub struct DsParseError(pub String);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DsIntegrityError {
    #[error("`{0}` is not a schema.org class")]
    UnknownClass(String),
    #[error("`{0}` is not a schema.org property")]
    UnknownProperty(String),
    #[error("`{0}` is not a schema.org datatype")]
    UnknownDatatype(String),
    #[error("`{0}` is not a schema.org enumeration")]
    UnknownEnumeration(String),
    #[error("type node at {0} has no target types")]
    EmptyTargetTypes(String),
    #[error("property `{0}` has no ranges")]
    EmptyRanges(String),
    #[error("property `{0}` appears twice in one type node")]
    DuplicateProperty(String),
    #[error("nested target `{target}` is not `{class}` or a subclass of it")]
    NestedTargetMismatch { target: String, class: String },
}

#[derive(Debug, Error)]
pub enum DsError {
    #[error(transparent)]
    Parse(#[from] DsParseError),
    #[error(transparent)]
    Integrity(#[from] DsIntegrityError),
}

/// Parses a DS document and validates every term against `vocab`.
pub fn load_domain_specification(source: &[u8], vocab: &VocabularyGraph) -> Result<DomainSpecification, DsError> {
    let ds: DomainSpecification = serde_json::from_slice(source).map_err(|e| DsParseError(e.to_string()))?;
    if ds.ds_version.split('.').next() != Some(DS_FORMAT_MAJOR) {
        return Err(DsParseError(format!("unsupported dsVersion `{}`", ds.ds_version)).into());
    }
    ds.check(vocab)?;
    Ok(ds)
}

impl DomainSpecification {
    /// Term and structure validation; [`load_domain_specification`] runs it
    /// on every document it returns.
    pub fn check(&self, vocab: &VocabularyGraph) -> Result<(), DsIntegrityError> {
        check_type_node(&self.root, "root", vocab)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("DS serializes")
    }
}

fn check_type_node(node: &TypeNode, at: &str, vocab: &VocabularyGraph) -> Result<(), DsIntegrityError> {
    if node.target_types.is_empty() {
        return Err(DsIntegrityError::EmptyTargetTypes(at.to_owned()));
    }
    for target in &node.target_types {
        if !vocab.is_class(target) || vocab.is_datatype(target) {
            return Err(DsIntegrityError::UnknownClass(target.clone()));
        }
    }
    let mut seen = HashSet::new();
    for property in &node.properties {
        if !seen.insert(property.name.as_str()) {
            return Err(DsIntegrityError::DuplicateProperty(property.name.clone()));
        }
        if vocab.property(&property.name).is_none() {
            return Err(DsIntegrityError::UnknownProperty(property.name.clone()));
        }
        if property.ranges.is_empty() {
            return Err(DsIntegrityError::EmptyRanges(property.name.clone()));
        }
        for range in &property.ranges {
            match range {
                RangeNode::Datatype(d) if !vocab.is_datatype(d) => {
                    return Err(DsIntegrityError::UnknownDatatype(d.clone()))
                }
                RangeNode::Enumeration(e) if !vocab.is_enumeration(e) => {
                    return Err(DsIntegrityError::UnknownEnumeration(e.clone()))
                }
                RangeNode::Type { class, node } => {
                    if !vocab.is_class(class) || vocab.is_datatype(class) {
                        return Err(DsIntegrityError::UnknownClass(class.clone()));
                    }
                    if let Some(nested) = node {
                        let at = format!("{at}.{}", property.name);
                        check_type_node(nested, &at, vocab)?;
                        if let Some(target) =
                            nested.target_types.iter().find(|t| !vocab.is_subclass_of(t, class).unwrap_or(false))
                        {
                            return Err(DsIntegrityError::NestedTargetMismatch {
                                target: target.clone(),
                                class: class.clone(),
                            });
                        }
                    }
                }
                _ => {}
            }
        }
    }
    Ok(())
}
