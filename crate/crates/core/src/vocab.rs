//! The schema.org term universe.
//!
//! A [`VocabularyGraph`] is loaded once from the vocabulary publisher's
//! JSON-LD dump and is immutable afterwards. Term names are stored without
//! namespace prefix; every query strips `http://schema.org/`,
//! `https://schema.org/` and `schema:` before looking a name up.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde_json::Value;
use thiserror::Error;

use crate::terms::{schema_term, strip_schema_prefix};

/// The vendored vocabulary dump.
pub const PINNED_SNAPSHOT: &[u8] = include_bytes!("../data/schemaorg-12.0-current-https.jsonld");

/// Identifier of [`PINNED_SNAPSHOT`].
pub const PINNED_SNAPSHOT_ID: &str = "schemaorg-12.0-current-https";

/// Root of the class hierarchy.
pub const THING: &str = "Thing";

const ENUMERATION: &str = "Enumeration";
const DATATYPE_ROOT: &str = "DataType";
const TEXT: &str = "Text";
const URL: &str = "URL";

/// Terms the dump models as classes but which carry literal values in
/// annotations.
const LITERAL_CLASSES: [&str; 1] = ["Duration"];

const RDFS_CLASS: [&str; 2] = ["rdfs:Class", "http://www.w3.org/2000/01/rdf-schema#Class"];
const RDF_PROPERTY: [&str; 2] = ["rdf:Property", "http://www.w3.org/1999/02/22-rdf-syntax-ns#Property"];
const SUB_CLASS_OF: [&str; 2] = ["rdfs:subClassOf", "http://www.w3.org/2000/01/rdf-schema#subClassOf"];
const DOMAIN_INCLUDES: [&str; 3] =
    ["schema:domainIncludes", "http://schema.org/domainIncludes", "https://schema.org/domainIncludes"];
const RANGE_INCLUDES: [&str; 3] =
    ["schema:rangeIncludes", "http://schema.org/rangeIncludes", "https://schema.org/rangeIncludes"];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VocabError {
    #[error("vocabulary parse error: {0}")]
    Parse(String),
    #[error("vocabulary integrity error: {0}")]
    Integrity(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown term `{0}`")]
pub struct UnknownTerm(pub String);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TermKind {
    Class,
    Property,
    Enumeration,
    EnumerationMember,
    Datatype,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDef {
    pub name: String,
    pub sub_class_of: BTreeSet<String>,
    pub is_enumeration: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyDef {
    pub name: String,
    pub domain_includes: BTreeSet<String>,
    pub range_includes: BTreeSet<String>,
}

#[derive(Debug, Clone)]
pub struct VocabularyGraph {
    classes: BTreeMap<String, ClassDef>,
    properties: BTreeMap<String, PropertyDef>,
    enumeration_members: BTreeMap<String, BTreeSet<String>>,
    datatypes: BTreeSet<String>,
    snapshot_id: String,
    /// Nearest datatype supertype of every datatype except the root.
    datatype_parent: HashMap<String, String>,
    /// Reflexive-transitive superclass closure of every class.
    ancestors: HashMap<String, HashSet<String>>,
    /// Enumeration classes each member belongs to.
    member_of: HashMap<String, BTreeSet<String>>,
}

struct RawTerm {
    name: String,
    types: Vec<String>,
    sub_class_of: Vec<String>,
    domain_includes: Vec<String>,
    range_includes: Vec<String>,
}

fn field<'a>(term: &'a serde_json::Map<String, Value>, keys: &[&str]) -> Option<&'a Value> {
    keys.iter().find_map(|k| term.get(*k))
}

fn id_list(value: Option<&Value>, context: &str) -> Result<Vec<String>, VocabError> {
    let Some(value) = value else {
        return Ok(Vec::new());
    };
    let items: Vec<&Value> = match value {
        Value::Array(items) => items.iter().collect(),
        other => vec![other],
    };
    items
        .into_iter()
        .map(|item| match item {
            Value::Object(obj) => obj
                .get("@id")
                .and_then(Value::as_str)
                .map(str::to_owned)
                .ok_or_else(|| VocabError::Parse(format!("{context}: reference without @id"))),
            Value::String(s) => Ok(s.clone()),
            _ => Err(VocabError::Parse(format!("{context}: unexpected reference value"))),
        })
        .collect()
}

fn string_list(value: Option<&Value>) -> Vec<String> {
    match value {
        Some(Value::String(s)) => vec![s.clone()],
        Some(Value::Array(items)) => items.iter().filter_map(Value::as_str).map(str::to_owned).collect(),
        _ => Vec::new(),
    }
}

/// Keeps only references into the schema.org namespace, stripped.
fn schema_refs(ids: Vec<String>) -> Vec<String> {
    ids.iter().filter_map(|id| schema_term(id)).map(str::to_owned).collect()
}

fn parse_raw_terms(source: &[u8]) -> Result<Vec<RawTerm>, VocabError> {
    if source.iter().all(u8::is_ascii_whitespace) {
        return Err(VocabError::Parse("empty vocabulary source".into()));
    }
    let doc: Value = serde_json::from_slice(source).map_err(|e| VocabError::Parse(e.to_string()))?;
    let graph = doc
        .get("@graph")
        .and_then(Value::as_array)
        .ok_or_else(|| VocabError::Parse("missing top-level @graph array".into()))?;

    let mut terms = Vec::with_capacity(graph.len());
    for entry in graph {
        let obj = entry.as_object().ok_or_else(|| VocabError::Parse("@graph entry is not an object".into()))?;
        let id = obj
            .get("@id")
            .and_then(Value::as_str)
            .ok_or_else(|| VocabError::Parse("@graph entry without @id".into()))?;
        // Terms outside the schema.org namespace are not part of the vocabulary.
        let Some(name) = schema_term(id) else {
            continue;
        };
        terms.push(RawTerm {
            name: name.to_owned(),
            types: string_list(obj.get("@type")),
            sub_class_of: schema_refs(id_list(field(obj, &SUB_CLASS_OF), id)?),
            domain_includes: schema_refs(id_list(field(obj, &DOMAIN_INCLUDES), id)?),
            range_includes: schema_refs(id_list(field(obj, &RANGE_INCLUDES), id)?),
        });
    }
    Ok(terms)
}

fn closure(start: &str, parents: &HashMap<String, Vec<String>>) -> HashSet<String> {
    let mut seen = HashSet::from([start.to_owned()]);
    let mut stack = vec![start];
    while let Some(current) = stack.pop() {
        for parent in parents.get(current).into_iter().flatten() {
            if seen.insert(parent.clone()) {
                stack.push(parent);
            }
        }
    }
    seen
}

fn find_cycle(parents: &HashMap<String, Vec<String>>) -> Option<String> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Active,
        Done,
    }
    let mut marks: HashMap<&str, Mark> = HashMap::new();
    let mut names: Vec<&String> = parents.keys().collect();
    names.sort();
    for start in names {
        if marks.contains_key(start.as_str()) {
            continue;
        }
        let mut stack: Vec<(&str, usize)> = vec![(start, 0)];
        marks.insert(start, Mark::Active);
        while let Some((node, next)) = stack.pop() {
            let children = parents.get(node).map(Vec::as_slice).unwrap_or_default();
            if let Some(child) = children.get(next) {
                stack.push((node, next + 1));
                match marks.get(child.as_str()) {
                    Some(Mark::Active) => return Some(child.clone()),
                    Some(Mark::Done) => {}
                    None => {
                        marks.insert(child, Mark::Active);
                        stack.push((child, 0));
                    }
                }
            } else {
                marks.insert(node, Mark::Done);
            }
        }
    }
    None
}

impl VocabularyGraph {
    /// Loads the vendored snapshot.
    pub fn pinned() -> Result<Self, VocabError> {
        Self::load(PINNED_SNAPSHOT, PINNED_SNAPSHOT_ID)
    }

    /// Parses a vocabulary dump: a top-level object with an `@graph` array of
    /// term objects carrying `@id`, `@type`, `rdfs:subClassOf`,
    /// `schema:domainIncludes` and `schema:rangeIncludes`.
    ///
    /// Classes typed `schema:DataType`, their subclasses, and `Duration` are
    /// loaded as datatypes. Properties lacking a domain or range declaration
    /// (retired terms) are skipped.
    pub fn load(source: &[u8], snapshot_id: impl Into<String>) -> Result<Self, VocabError> {
        let terms = parse_raw_terms(source)?;

        let mut class_parents: HashMap<String, Vec<String>> = HashMap::new();
        let mut datatype_roots: HashSet<String> = HashSet::new();
        let mut instances: Vec<&RawTerm> = Vec::new();
        let mut property_terms: Vec<&RawTerm> = Vec::new();

        for term in &terms {
            let is_class = term.types.iter().any(|t| RDFS_CLASS.contains(&t.as_str()));
            let is_property = term.types.iter().any(|t| RDF_PROPERTY.contains(&t.as_str()));
            if is_class && is_property {
                return Err(VocabError::Integrity(format!("`{}` is both a class and a property", term.name)));
            }
            if is_class {
                if term.sub_class_of.iter().any(|p| p == &term.name) {
                    return Err(VocabError::Integrity(format!("`{}` is declared its own superclass", term.name)));
                }
                if term.types.iter().any(|t| strip_schema_prefix(t) == DATATYPE_ROOT && schema_term(t).is_some())
                    || term.name == DATATYPE_ROOT
                {
                    datatype_roots.insert(term.name.clone());
                }
                class_parents.entry(term.name.clone()).or_default().extend(term.sub_class_of.iter().cloned());
            } else if is_property {
                property_terms.push(term);
            } else {
                instances.push(term);
            }
        }

        if let Some(name) = find_cycle(&class_parents) {
            return Err(VocabError::Integrity(format!("cyclic subclass chain through `{name}`")));
        }
        for (name, parents) in &class_parents {
            if let Some(missing) = parents.iter().find(|p| !class_parents.contains_key(*p)) {
                return Err(VocabError::Integrity(format!("`{name}` has undefined superclass `{missing}`")));
            }
        }

        let ancestors_all: HashMap<String, HashSet<String>> =
            class_parents.keys().map(|name| (name.clone(), closure(name, &class_parents))).collect();

        let datatypes: BTreeSet<String> = class_parents
            .keys()
            .filter(|name| {
                LITERAL_CLASSES.contains(&name.as_str())
                    || ancestors_all[*name].iter().any(|a| datatype_roots.contains(a))
            })
            .cloned()
            .collect();

        let mut datatype_parent = HashMap::new();
        for name in &datatypes {
            if name == DATATYPE_ROOT {
                continue;
            }
            let parent = class_parents[name]
                .iter()
                .find(|p| datatypes.contains(*p))
                .cloned()
                .unwrap_or_else(|| DATATYPE_ROOT.to_owned());
            datatype_parent.insert(name.clone(), parent);
        }
        if !datatype_parent.is_empty() && !datatypes.contains(DATATYPE_ROOT) {
            return Err(VocabError::Integrity("datatypes present but `DataType` is undefined".into()));
        }

        let mut classes = BTreeMap::new();
        let mut ancestors = HashMap::new();
        for (name, parents) in &class_parents {
            if datatypes.contains(name) {
                continue;
            }
            let sub_class_of: BTreeSet<String> = parents.iter().filter(|p| !datatypes.contains(*p)).cloned().collect();
            if sub_class_of.is_empty() && name != THING {
                return Err(VocabError::Integrity(format!("class `{name}` has no superclass")));
            }
            let closure = ancestors_all[name].clone();
            if !closure.contains(THING) {
                return Err(VocabError::Integrity(format!("class `{name}` does not reach `{THING}`")));
            }
            classes.insert(
                name.clone(),
                ClassDef { name: name.clone(), sub_class_of, is_enumeration: closure.contains(ENUMERATION) },
            );
            ancestors.insert(name.clone(), closure);
        }

        let resolves = |n: &String| classes.contains_key(n) || datatypes.contains(n);
        let mut properties = BTreeMap::new();
        for term in property_terms {
            if term.domain_includes.is_empty() || term.range_includes.is_empty() {
                continue;
            }
            for reference in term.domain_includes.iter().chain(&term.range_includes) {
                if !resolves(reference) {
                    return Err(VocabError::Integrity(format!(
                        "property `{}` references undefined term `{reference}`",
                        term.name
                    )));
                }
            }
            properties.insert(
                term.name.clone(),
                PropertyDef {
                    name: term.name.clone(),
                    domain_includes: term.domain_includes.iter().cloned().collect(),
                    range_includes: term.range_includes.iter().cloned().collect(),
                },
            );
        }

        let mut enumeration_members: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        let mut member_of: HashMap<String, BTreeSet<String>> = HashMap::new();
        for term in instances {
            for ty in term.types.iter().filter_map(|t| schema_term(t)) {
                if !resolves(&ty.to_owned()) {
                    return Err(VocabError::Integrity(format!("member `{}` has undefined type `{ty}`", term.name)));
                }
                enumeration_members.entry(ty.to_owned()).or_default().insert(term.name.clone());
                member_of.entry(term.name.clone()).or_default().insert(ty.to_owned());
            }
        }

        for name in classes.keys() {
            if properties.contains_key(name) {
                return Err(VocabError::Integrity(format!("`{name}` is both a class and a property")));
            }
        }
        for name in &datatypes {
            if properties.contains_key(name) {
                return Err(VocabError::Integrity(format!("`{name}` is both a datatype and a property")));
            }
        }

        Ok(Self {
            classes,
            properties,
            enumeration_members,
            datatypes,
            snapshot_id: snapshot_id.into(),
            datatype_parent,
            ancestors,
            member_of,
        })
    }

    pub fn snapshot_id(&self) -> &str {
        &self.snapshot_id
    }

    pub fn classes(&self) -> &BTreeMap<String, ClassDef> {
        &self.classes
    }

    pub fn properties(&self) -> &BTreeMap<String, PropertyDef> {
        &self.properties
    }

    pub fn enumeration_members(&self) -> &BTreeMap<String, BTreeSet<String>> {
        &self.enumeration_members
    }

    pub fn datatypes(&self) -> &BTreeSet<String> {
        &self.datatypes
    }

    pub fn class(&self, name: &str) -> Option<&ClassDef> {
        self.classes.get(strip_schema_prefix(name))
    }

    pub fn property(&self, name: &str) -> Option<&PropertyDef> {
        self.properties.get(strip_schema_prefix(name))
    }

    pub fn is_class(&self, name: &str) -> bool {
        self.class(name).is_some()
    }

    pub fn is_datatype(&self, name: &str) -> bool {
        self.datatypes.contains(strip_schema_prefix(name))
    }

    pub fn is_enumeration(&self, name: &str) -> bool {
        self.class(name).is_some_and(|c| c.is_enumeration)
    }

    /// Case-sensitive classification of a term name.
    pub fn lookup_term(&self, name: &str) -> TermKind {
        let name = strip_schema_prefix(name);
        if let Some(class) = self.classes.get(name) {
            if class.is_enumeration {
                TermKind::Enumeration
            } else {
                TermKind::Class
            }
        } else if self.properties.contains_key(name) {
            TermKind::Property
        } else if self.datatypes.contains(name) {
            TermKind::Datatype
        } else if self.member_of.contains_key(name) {
            TermKind::EnumerationMember
        } else {
            TermKind::Unknown
        }
    }

    /// Reflexive-transitive subclass test.
    pub fn is_subclass_of(&self, sub: &str, sup: &str) -> Result<bool, UnknownTerm> {
        let sub = strip_schema_prefix(sub);
        let sup = strip_schema_prefix(sup);
        let closure = self.ancestors.get(sub).ok_or_else(|| UnknownTerm(sub.to_owned()))?;
        if !self.classes.contains_key(sup) {
            return Err(UnknownTerm(sup.to_owned()));
        }
        Ok(closure.contains(sup))
    }

    /// Superclass closure of a class, including the class itself.
    pub fn ancestors(&self, class: &str) -> Option<&HashSet<String>> {
        self.ancestors.get(strip_schema_prefix(class))
    }

    /// True iff some class in the property's domain is a superclass of `class`.
    pub fn property_applies_to(&self, property: &str, class: &str) -> Result<bool, UnknownTerm> {
        let def = self.property(property).ok_or_else(|| UnknownTerm(property.to_owned()))?;
        let closure = self.ancestors(class).ok_or_else(|| UnknownTerm(class.to_owned()))?;
        Ok(def.domain_includes.iter().any(|d| closure.contains(d)))
    }

    /// True iff a value of class or datatype `value_kind` is admitted by the
    /// property's declared ranges.
    pub fn value_conforms_to_range(&self, property: &str, value_kind: &str) -> Result<bool, UnknownTerm> {
        let def = self.property(property).ok_or_else(|| UnknownTerm(property.to_owned()))?;
        let kind = strip_schema_prefix(value_kind);
        if let Some(closure) = self.ancestors.get(kind) {
            Ok(def.range_includes.iter().any(|r| closure.contains(r)))
        } else if self.datatypes.contains(kind) {
            Ok(def.range_includes.iter().any(|r| self.datatype_widens_to(kind, r)))
        } else {
            Err(UnknownTerm(kind.to_owned()))
        }
    }

    /// Datatype conformance: identity, the declared datatype hierarchy
    /// (`URL` is `Text`, `Integer` and `Float` are `Number`, everything is
    /// `DataType`), and `Integer` widening to `Float`. `Date` and `DateTime`
    /// never convert into each other.
    pub fn datatype_widens_to(&self, datatype: &str, range: &str) -> bool {
        if datatype == range {
            return self.datatypes.contains(datatype);
        }
        if datatype == "Integer" && range == "Float" && self.datatypes.contains(range) {
            return true;
        }
        let mut current = datatype;
        while let Some(parent) = self.datatype_parent.get(current) {
            if parent == range {
                return true;
            }
            current = parent;
        }
        false
    }

    /// Whether a literal whose inferred datatype is `inferred` fits the
    /// datatype `range`. Beyond [`Self::datatype_widens_to`], every lexical
    /// form is a string, so `Text` and its textual refinements
    /// (`CssSelectorType`, `XPathType`, `PronounceableText`) accept any
    /// literal: a postal code `6263` is valid text.
    pub fn datatype_accepts_literal(&self, range: &str, inferred: &str) -> bool {
        if self.datatype_widens_to(inferred, range) {
            return true;
        }
        self.datatypes.contains(inferred) && range != URL && self.datatype_widens_to(range, TEXT)
    }

    /// Whether `range` is `Text` or one of its textual refinements other
    /// than `URL`, i.e. a range that accepts free text.
    pub fn is_textual(&self, range: &str) -> bool {
        range == TEXT || (range != URL && self.datatype_widens_to(range, TEXT)) || range == DATATYPE_ROOT
    }

    /// Enumeration classes (or `Boolean`) listing `member` among their members.
    pub fn enumerations_of_member(&self, member: &str) -> Option<&BTreeSet<String>> {
        self.member_of.get(strip_schema_prefix(member))
    }

    /// Whether `member` (bare or prefixed) is a member of `enumeration` or of
    /// one of its subclasses.
    pub fn is_member_of(&self, member: &str, enumeration: &str) -> bool {
        let enumeration = strip_schema_prefix(enumeration);
        self.enumerations_of_member(member).is_some_and(|owners| {
            owners.iter().any(|owner| {
                owner == enumeration || self.ancestors.get(owner.as_str()).is_some_and(|a| a.contains(enumeration))
            })
        })
    }
}
