//! JSON-LD blocks, schema.org flavour: only `@context`, `@type`, `@id`,
//! `@graph` and `@value` are honored. No expansion algorithm runs; property
//! names and types are taken as written, minus any schema.org prefix.

use serde_json::{Map, Value};

use super::graph::{BuildValue, GraphBuilder, NodeId};
use super::Issue;
use crate::terms::strip_schema_prefix;

const SCHEMA_CONTEXTS: [&str; 6] = [
    "http://schema.org",
    "https://schema.org",
    "http://schema.org/",
    "https://schema.org/",
    "schema.org",
    "schema.org/",
];

/// Keywords whose presence inside a value object is tolerated and ignored.
const VALUE_OBJECT_EXTRAS: [&str; 4] = ["@language", "@type", "@direction", "@index"];

enum ContextCheck {
    Schema,
    Missing,
    Foreign(String),
}

fn check_context(ctx: Option<&Value>) -> ContextCheck {
    let Some(ctx) = ctx else {
        return ContextCheck::Missing;
    };
    match ctx {
        Value::String(s) if SCHEMA_CONTEXTS.contains(&s.as_str()) => ContextCheck::Schema,
        Value::String(s) => ContextCheck::Foreign(format!("context `{s}` is not a schema.org context")),
        Value::Object(obj) => {
            match obj.get("@vocab").and_then(Value::as_str) {
                Some(vocab) if SCHEMA_CONTEXTS.contains(&vocab) => {}
                Some(vocab) => return ContextCheck::Foreign(format!("default vocabulary `{vocab}` is not schema.org")),
                None => return ContextCheck::Foreign("context object without a schema.org @vocab".into()),
            }
            match obj.keys().find(|k| !k.starts_with('@')) {
                Some(term) => ContextCheck::Foreign(format!("context defines term alias `{term}`")),
                None => ContextCheck::Schema,
            }
        }
        Value::Array(items) => {
            let mut saw_schema = false;
            for item in items {
                match item {
                    Value::String(s) if SCHEMA_CONTEXTS.contains(&s.as_str()) => saw_schema = true,
                    Value::Object(obj) => {
                        if let Some(term) = obj.keys().find(|k| !k.starts_with('@')) {
                            return ContextCheck::Foreign(format!("context defines term alias `{term}`"));
                        }
                        if let ContextCheck::Schema = check_context(Some(item)) {
                            saw_schema = true;
                        } else if obj.contains_key("@vocab") {
                            return check_context(Some(item));
                        }
                    }
                    other => return check_context(Some(other)),
                }
            }
            if saw_schema {
                ContextCheck::Schema
            } else {
                ContextCheck::Foreign("context array names no schema.org context".into())
            }
        }
        _ => ContextCheck::Foreign("context has an unsupported shape".into()),
    }
}

pub(crate) struct JsonLdConverter<'a> {
    builder: &'a mut GraphBuilder,
    issues: &'a mut Vec<Issue>,
}

impl<'a> JsonLdConverter<'a> {
    pub fn new(builder: &'a mut GraphBuilder, issues: &'a mut Vec<Issue>) -> Self {
        Self { builder, issues }
    }

    /// Converts a parsed document. Returns false when the top level is not
    /// an object or an array.
    pub fn document(&mut self, doc: &Value) -> bool {
        match doc {
            Value::Array(items) => {
                for item in items {
                    match item {
                        Value::Object(obj) => self.top_object(obj, None),
                        _ => self.issues.push(Issue::block("non-object entry in top-level array skipped")),
                    }
                }
                true
            }
            Value::Object(obj) => {
                self.top_object(obj, None);
                true
            }
            _ => false,
        }
    }

    fn top_object(&mut self, obj: &Map<String, Value>, inherited: Option<&Value>) {
        let context = obj.get("@context").or(inherited);
        if let Some(graph) = obj.get("@graph") {
            match check_context(context) {
                ContextCheck::Schema => {}
                ContextCheck::Missing => self.issues.push(Issue::block("missing @context; schema.org assumed")),
                ContextCheck::Foreign(msg) => self.issues.push(Issue::block(msg)),
            }
            if obj.keys().any(|k| !matches!(k.as_str(), "@context" | "@graph" | "@id")) {
                self.issues.push(Issue::block("properties beside @graph describe a named graph; skipped"));
            }
            let items: Vec<&Value> = match graph {
                Value::Array(items) => items.iter().collect(),
                other => vec![other],
            };
            for item in items {
                match item {
                    Value::Object(inner) => {
                        if let Some((id, merged)) = self.node(inner, true) {
                            if !merged {
                                self.builder.add_root(id);
                            }
                        }
                    }
                    _ => self.issues.push(Issue::block("non-object @graph entry skipped")),
                }
            }
            return;
        }

        let Some((id, merged)) = self.node(obj, true) else {
            return;
        };
        if !merged {
            self.builder.add_root(id);
        }
        match check_context(context) {
            ContextCheck::Schema => {}
            ContextCheck::Missing => {
                if inherited.is_none() {
                    self.issues.push(Issue::node(id, "missing @context; schema.org assumed"));
                }
            }
            ContextCheck::Foreign(msg) => self.issues.push(Issue::node(id, msg)),
        }
    }

    /// Converts a node object. `top` marks objects whose `@context` was
    /// already checked by the caller.
    fn node(&mut self, obj: &Map<String, Value>, top: bool) -> Option<(NodeId, bool)> {
        let types = match obj.get("@type") {
            None => Vec::new(),
            Some(Value::String(s)) => vec![strip_schema_prefix(s).to_owned()],
            Some(Value::Array(items)) => {
                items.iter().filter_map(Value::as_str).map(|s| strip_schema_prefix(s).to_owned()).collect()
            }
            Some(_) => Vec::new(),
        };
        let identifier = obj.get("@id").and_then(Value::as_str).map(str::to_owned);
        let (id, merged) = self.builder.node(types, identifier);

        if matches!(obj.get("@type"), Some(t) if !t.is_string() && !t.is_array()) {
            self.issues.push(Issue::node(id, "@type must be a string or an array of strings"));
        }

        for (key, value) in obj {
            match key.as_str() {
                "@type" | "@id" => {}
                "@context" => {
                    if !top && !matches!(check_context(Some(value)), ContextCheck::Schema) {
                        self.issues.push(Issue::node(id, "embedded non-schema.org context skipped"));
                    }
                }
                "@graph" => self.issues.push(Issue::node(id, "nested @graph skipped")),
                keyword if keyword.starts_with('@') => {
                    self.issues.push(Issue::node(id, format!("keyword `{keyword}` is not supported")));
                }
                property => {
                    let name = strip_schema_prefix(property);
                    self.builder.touch_property(id, name);
                    let items: Vec<&Value> = match value {
                        Value::Array(items) => items.iter().collect(),
                        other => vec![other],
                    };
                    for item in items {
                        if let Some(v) = self.value(id, name, item) {
                            self.builder.push_value(id, name, v);
                        }
                    }
                }
            }
        }
        Some((id, merged))
    }

    fn value(&mut self, owner: NodeId, property: &str, value: &Value) -> Option<BuildValue> {
        match value {
            Value::Null => Some(BuildValue::Literal(String::new())),
            Value::String(s) => Some(BuildValue::Literal(s.clone())),
            Value::Bool(b) => Some(BuildValue::Literal(b.to_string())),
            Value::Number(n) => Some(BuildValue::Literal(n.to_string())),
            Value::Array(_) => {
                self.issues.push(Issue::property(owner, property, "nested array value skipped"));
                None
            }
            Value::Object(obj) => {
                if let Some(inner) = obj.get("@value") {
                    if let Some(extra) =
                        obj.keys().find(|k| *k != "@value" && !VALUE_OBJECT_EXTRAS.contains(&k.as_str()))
                    {
                        self.issues.push(Issue::property(
                            owner,
                            property,
                            format!("value object key `{extra}` ignored"),
                        ));
                    }
                    return match inner {
                        Value::Object(_) | Value::Array(_) => {
                            self.issues.push(Issue::property(owner, property, "structured @value skipped"));
                            None
                        }
                        scalar => self.value(owner, property, scalar),
                    };
                }
                if let Some(keyword) = ["@list", "@set"].into_iter().find(|k| obj.contains_key(*k)) {
                    self.issues.push(Issue::property(owner, property, format!("keyword `{keyword}` is not supported")));
                    return None;
                }
                let is_reference = obj.keys().all(|k| k == "@id" || k == "@context") && obj.contains_key("@id");
                if is_reference {
                    if let Some(iri) = obj.get("@id").and_then(Value::as_str) {
                        return Some(BuildValue::Reference(iri.to_owned()));
                    }
                }
                let (child, merged) = self.node(obj, false)?;
                if merged {
                    let iri = obj.get("@id").and_then(Value::as_str).unwrap_or_default();
                    Some(BuildValue::Reference(iri.to_owned()))
                } else {
                    Some(BuildValue::Entity(child))
                }
            }
        }
    }
}
