use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use super::literal::{classify_literal, LiteralType};
use super::path::{AnnotationPath, PathSegment};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum SourceFormat {
    JsonLd,
    Microdata,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValueKind {
    Entity(NodeId),
    Literal { raw: String, datatype: LiteralType },
    Reference(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyValue {
    pub kind: ValueKind,
    pub path: AnnotationPath,
}

impl PropertyValue {
    pub fn literal(&self) -> Option<(&str, LiteralType)> {
        match &self.kind {
            ValueKind::Literal { raw, datatype } => Some((raw, *datatype)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotationNode {
    pub types: Vec<String>,
    pub identifier: Option<String>,
    /// Properties in source order; each holds its values in source order.
    pub properties: Vec<(String, Vec<PropertyValue>)>,
    pub path: AnnotationPath,
}

impl AnnotationNode {
    pub fn values(&self, property: &str) -> &[PropertyValue] {
        self.properties
            .iter()
            .find(|(name, _)| name == property)
            .map(|(_, values)| values.as_slice())
            .unwrap_or_default()
    }
}

/// A parsed annotation block. Entity edges form a forest rooted at
/// [`AnnotationGraph::roots`]; cycles can only arise through
/// [`ValueKind::Reference`] identifiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotationGraph {
    nodes: Vec<AnnotationNode>,
    roots: Vec<NodeId>,
    block_index: usize,
    source_format: SourceFormat,
    by_identifier: HashMap<String, NodeId>,
}

/// What a path points at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resolved<'a> {
    Node(NodeId),
    Value(&'a PropertyValue),
}

impl AnnotationGraph {
    pub fn roots(&self) -> &[NodeId] {
        &self.roots
    }

    pub fn root_nodes(&self) -> impl Iterator<Item = (NodeId, &AnnotationNode)> {
        self.roots.iter().map(|id| (*id, &self.nodes[id.0]))
    }

    pub fn node(&self, id: NodeId) -> &AnnotationNode {
        &self.nodes[id.0]
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &AnnotationNode)> {
        self.nodes.iter().enumerate().map(|(i, n)| (NodeId(i), n))
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn block_index(&self) -> usize {
        self.block_index
    }

    pub fn source_format(&self) -> SourceFormat {
        self.source_format
    }

    pub fn node_by_identifier(&self, iri: &str) -> Option<NodeId> {
        self.by_identifier.get(iri).copied()
    }

    /// Node a value designates: the nested entity, or the in-block node a
    /// reference points at.
    pub fn target_node(&self, value: &PropertyValue) -> Option<NodeId> {
        match &value.kind {
            ValueKind::Entity(id) => Some(*id),
            ValueKind::Reference(iri) => self.node_by_identifier(iri),
            ValueKind::Literal { .. } => None,
        }
    }

    pub fn has_typed_node(&self) -> bool {
        self.nodes.iter().any(|n| !n.types.is_empty())
    }

    /// Follows a rendered path from the roots.
    pub fn resolve_path(&self, path: &AnnotationPath) -> Option<Resolved<'_>> {
        let mut segments = path.segments().iter().peekable();
        let Some(PathSegment::Root(root)) = segments.next() else {
            return None;
        };
        let mut node = *self.roots.get(*root)?;
        let mut resolved = Resolved::Node(node);
        while let Some(segment) = segments.next() {
            let PathSegment::Property(name) = segment else {
                return None;
            };
            let values = self.node(node).values(name);
            let value = match segments.peek() {
                Some(PathSegment::Index(i)) => {
                    let i = *i;
                    segments.next();
                    if values.len() < 2 {
                        return None;
                    }
                    values.get(i)?
                }
                _ if values.len() == 1 => &values[0],
                _ => return None,
            };
            resolved = Resolved::Value(value);
            if segments.peek().is_some() {
                match value.kind {
                    ValueKind::Entity(id) => node = id,
                    _ => return None,
                }
            }
        }
        Some(resolved)
    }

    /// JSON rendering of the graph, nested entities inline.
    pub fn to_json(&self) -> Value {
        json!({
            "blockIndex": self.block_index,
            "sourceFormat": self.source_format,
            "roots": self.roots.iter().map(|id| self.node_json(*id, true)).collect::<Vec<_>>(),
        })
    }

    /// Structure-only rendering used to compare graphs from different
    /// serializations: no paths, no block metadata, properties sorted by
    /// name (values keep their order).
    pub fn structure(&self) -> Value {
        Value::Array(self.roots.iter().map(|id| self.node_json(*id, false)).collect())
    }

    fn node_json(&self, id: NodeId, with_paths: bool) -> Value {
        let node = self.node(id);
        let mut obj = Map::new();
        if with_paths {
            obj.insert("path".into(), Value::String(node.path.to_string()));
        }
        obj.insert("types".into(), json!(node.types));
        if let Some(identifier) = &node.identifier {
            obj.insert("id".into(), Value::String(identifier.clone()));
        }
        let mut properties: Vec<&(String, Vec<PropertyValue>)> = node.properties.iter().collect();
        if !with_paths {
            properties.sort_by(|a, b| a.0.cmp(&b.0));
        }
        let mut props = Map::new();
        for (name, values) in properties {
            let rendered = values
                .iter()
                .map(|v| {
                    let mut value = Map::new();
                    if with_paths {
                        value.insert("path".into(), Value::String(v.path.to_string()));
                    }
                    match &v.kind {
                        ValueKind::Entity(child) => {
                            value.insert("entity".into(), self.node_json(*child, with_paths));
                        }
                        ValueKind::Literal { raw, datatype } => {
                            value.insert("literal".into(), Value::String(raw.clone()));
                            value.insert("datatype".into(), json!(datatype));
                        }
                        ValueKind::Reference(iri) => {
                            value.insert("reference".into(), Value::String(iri.clone()));
                        }
                    }
                    Value::Object(value)
                })
                .collect();
            props.insert(name.clone(), Value::Array(rendered));
        }
        obj.insert("properties".into(), Value::Object(props));
        Value::Object(obj)
    }
}

/// Value under construction; entity children are builder node ids.
#[derive(Debug, Clone)]
pub(crate) enum BuildValue {
    Entity(NodeId),
    Literal(String),
    Reference(String),
}

#[derive(Debug, Default)]
struct BuildNode {
    types: Vec<String>,
    identifier: Option<String>,
    properties: Vec<(String, Vec<BuildValue>)>,
}

/// Incremental graph construction with identifier deduplication.
#[derive(Debug, Default)]
pub(crate) struct GraphBuilder {
    nodes: Vec<BuildNode>,
    roots: Vec<NodeId>,
    by_identifier: HashMap<String, NodeId>,
}

impl GraphBuilder {
    /// Returns the node for `identifier`, creating it when new. The flag is
    /// true when an earlier node with the same identifier was reused.
    pub fn node(&mut self, types: Vec<String>, identifier: Option<String>) -> (NodeId, bool) {
        if let Some(existing) = identifier.as_ref().and_then(|iri| self.by_identifier.get(iri)) {
            let existing = *existing;
            let node = &mut self.nodes[existing.0];
            for ty in types {
                if !node.types.contains(&ty) {
                    node.types.push(ty);
                }
            }
            return (existing, true);
        }
        let id = NodeId(self.nodes.len());
        if let Some(iri) = &identifier {
            self.by_identifier.insert(iri.clone(), id);
        }
        self.nodes.push(BuildNode { types, identifier, properties: Vec::new() });
        (id, false)
    }

    pub fn add_root(&mut self, id: NodeId) {
        if !self.roots.contains(&id) {
            self.roots.push(id);
        }
    }

    pub fn push_value(&mut self, node: NodeId, property: &str, value: BuildValue) {
        let properties = &mut self.nodes[node.0].properties;
        match properties.iter_mut().find(|(name, _)| name == property) {
            Some((_, values)) => values.push(value),
            None => properties.push((property.to_owned(), vec![value])),
        }
    }

    /// Declares a property with no values yet, fixing its source position.
    pub fn touch_property(&mut self, node: NodeId, property: &str) {
        let properties = &mut self.nodes[node.0].properties;
        if !properties.iter().any(|(name, _)| name == property) {
            properties.push((property.to_owned(), Vec::new()));
        }
    }

    /// Assigns paths and freezes the graph. Properties that ended up with no
    /// values are dropped.
    pub fn finish(self, block_index: usize, source_format: SourceFormat) -> AnnotationGraph {
        let mut nodes: Vec<AnnotationNode> = self
            .nodes
            .iter()
            .map(|n| AnnotationNode {
                types: n.types.clone(),
                identifier: n.identifier.clone(),
                properties: Vec::new(),
                path: AnnotationPath::block(),
            })
            .collect();

        let mut stack: Vec<(NodeId, AnnotationPath)> =
            self.roots.iter().enumerate().rev().map(|(i, id)| (*id, AnnotationPath::root(i))).collect();
        let mut assigned = vec![false; nodes.len()];
        while let Some((id, path)) = stack.pop() {
            if assigned[id.0] {
                continue;
            }
            assigned[id.0] = true;
            let build = &self.nodes[id.0];
            let mut properties = Vec::with_capacity(build.properties.len());
            let mut children = Vec::new();
            for (name, values) in &build.properties {
                if values.is_empty() {
                    continue;
                }
                let count = values.len();
                let converted = values
                    .iter()
                    .enumerate()
                    .map(|(i, v)| {
                        let value_path = path.value(name, i, count);
                        let kind = match v {
                            BuildValue::Entity(child) => {
                                children.push((*child, value_path.clone()));
                                ValueKind::Entity(*child)
                            }
                            BuildValue::Literal(raw) => {
                                ValueKind::Literal { datatype: classify_literal(raw), raw: raw.clone() }
                            }
                            BuildValue::Reference(iri) => ValueKind::Reference(iri.clone()),
                        };
                        PropertyValue { kind, path: value_path }
                    })
                    .collect();
                properties.push((name.clone(), converted));
            }
            nodes[id.0].properties = properties;
            nodes[id.0].path = path;
            stack.extend(children.into_iter().rev());
        }

        AnnotationGraph { nodes, roots: self.roots, block_index, source_format, by_identifier: self.by_identifier }
    }
}
