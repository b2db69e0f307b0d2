//! Random vocabulary-driven generators shared by property tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::OnceLock;

use rand::rngs::StdRng;
use rand::seq::{IteratorRandom, SliceRandom};
use rand::Rng;
use schemalint_core::annotation::classify_literal;
use schemalint_core::ds::{DomainSpecification, PropertyNode, RangeNode, TypeNode};
use schemalint_core::vocab::VocabularyGraph;
use serde_json::{json, Map, Value};

pub fn vocab() -> &'static VocabularyGraph {
    static VOCAB: OnceLock<VocabularyGraph> = OnceLock::new();
    VOCAB.get_or_init(|| VocabularyGraph::pinned().expect("bundled snapshot loads"))
}

pub const SAMPLES: [&str; 9] =
    ["2020-01-01", "2020-01-01T10:00:00", "10:00:00", "PT1H", "true", "1", "1.5", "https://example.org/", "example"];

/// Classes usable as entity types.
pub fn entity_classes(vocab: &VocabularyGraph) -> Vec<&str> {
    vocab.classes().keys().map(String::as_str).collect()
}

fn subclasses<'v>(vocab: &'v VocabularyGraph, class: &str) -> Vec<&'v str> {
    vocab.classes().keys().map(String::as_str).filter(|c| vocab.is_subclass_of(c, class).unwrap_or(false)).collect()
}

pub fn applicable_properties<'v>(vocab: &'v VocabularyGraph, class: &str) -> Vec<&'v str> {
    vocab
        .properties()
        .keys()
        .map(String::as_str)
        .filter(|p| vocab.property_applies_to(p, class).unwrap_or(false))
        .collect()
}

/// First enumeration member reachable from `enumeration`, if any.
pub fn some_member<'v>(vocab: &'v VocabularyGraph, enumeration: &str) -> Option<&'v str> {
    vocab
        .enumeration_members()
        .iter()
        .filter(|(owner, _)| vocab.is_subclass_of(owner, enumeration).unwrap_or(false))
        .find_map(|(_, members)| members.iter().next().map(String::as_str))
}

pub fn sample_for(vocab: &VocabularyGraph, datatype: &str) -> Option<&'static str> {
    SAMPLES.iter().copied().find(|s| {
        classify_literal(s).datatype_name().is_some_and(|name| vocab.datatype_accepts_literal(datatype, name))
    })
}

/// A random well-formed DS: depth at most `max_depth`, at most six
/// properties per node, at most one type range per property.
pub fn random_ds(vocab: &VocabularyGraph, rng: &mut StdRng, max_depth: usize) -> DomainSpecification {
    let classes = entity_classes(vocab);
    let target = *classes.choose(rng).unwrap();
    DomainSpecification {
        name: format!("random-{target}"),
        ds_version: "1.0".into(),
        root: random_type_node(vocab, rng, target, 1, max_depth),
    }
}

fn random_type_node(
    vocab: &VocabularyGraph,
    rng: &mut StdRng,
    target: &str,
    depth: usize,
    max_depth: usize,
) -> TypeNode {
    let candidates = applicable_properties(vocab, target);
    let count = rng.gen_range(0..=6.min(candidates.len()));
    let mut properties = Vec::new();
    for name in candidates.choose_multiple(rng, count) {
        let def = vocab.property(name).unwrap();
        let mut ranges = Vec::new();
        let mut has_type_range = false;
        let range_names: Vec<&String> = def.range_includes.iter().collect();
        let wanted = rng.gen_range(1..=range_names.len());
        for range in range_names.choose_multiple(rng, wanted) {
            if vocab.is_datatype(range) {
                ranges.push(RangeNode::Datatype((*range).clone()));
            } else if vocab.is_enumeration(range) && some_member(vocab, range).is_some() && rng.gen_bool(0.5) {
                ranges.push(RangeNode::Enumeration((*range).clone()));
            } else if vocab.is_class(range) && !has_type_range {
                has_type_range = true;
                let node = (depth < max_depth && rng.gen_bool(0.6)).then(|| {
                    let nested_target = *subclasses(vocab, range).choose(rng).unwrap();
                    random_type_node(vocab, rng, nested_target, depth + 1, max_depth)
                });
                ranges.push(RangeNode::Type { class: (*range).clone(), node });
            }
        }
        if ranges.is_empty() {
            continue;
        }
        properties.push(PropertyNode {
            name: (*name).to_owned(),
            is_optional: rng.gen_bool(0.4),
            multiple_values_allowed: rng.gen_bool(0.3),
            ranges,
        });
    }
    TypeNode { target_types: vec![target.to_owned()], properties }
}

/// A JSON-LD instance of a random class: up to six applicable properties,
/// each with one value drawn from its declared ranges, nested entities up
/// to `max_depth`. Every entity carries at least one property.
pub fn random_compliant_instance(vocab: &VocabularyGraph, rng: &mut StdRng, max_depth: usize) -> Value {
    let classes = entity_classes(vocab);
    let class = *classes.choose(rng).unwrap();
    let mut root = random_entity(vocab, rng, class, 1, max_depth);
    let mut out = Map::new();
    out.insert("@context".into(), json!("https://schema.org"));
    out.append(&mut root);
    Value::Object(out)
}

fn random_entity(
    vocab: &VocabularyGraph,
    rng: &mut StdRng,
    class: &str,
    depth: usize,
    max_depth: usize,
) -> Map<String, Value> {
    let mut out = Map::new();
    out.insert("@type".into(), json!(class));
    let candidates = applicable_properties(vocab, class);
    let count = rng.gen_range(1..=6.min(candidates.len()));
    let mut used = BTreeSet::new();
    for name in candidates.choose_multiple(rng, count) {
        if let Some(value) = random_value(vocab, rng, name, depth, max_depth) {
            used.insert(*name);
            out.insert((*name).to_owned(), value);
        }
    }
    if used.is_empty() {
        out.insert("name".into(), json!("example"));
    }
    out
}

fn random_value(
    vocab: &VocabularyGraph,
    rng: &mut StdRng,
    property: &str,
    depth: usize,
    max_depth: usize,
) -> Option<Value> {
    let def = vocab.property(property)?;
    let mut ranges: Vec<&String> = def.range_includes.iter().collect();
    ranges.shuffle(rng);
    for range in ranges {
        if vocab.is_datatype(range) {
            if let Some(sample) = sample_for(vocab, range) {
                return Some(json!(sample));
            }
        } else if vocab.is_enumeration(range) {
            if let Some(member) = some_member(vocab, range) {
                return Some(json!(format!("https://schema.org/{member}")));
            }
        } else if vocab.is_class(range) && depth < max_depth {
            let sub = *subclasses(vocab, range).iter().choose(rng)?;
            return Some(Value::Object(random_entity(vocab, rng, sub, depth + 1, max_depth)));
        }
    }
    None
}

/// Annotation paths (`$0.a.b`) paired with JSON object paths for every
/// property of a single-root instance, depth first.
pub fn property_locations(instance: &Value) -> Vec<(String, Vec<String>)> {
    fn walk(obj: &Map<String, Value>, prefix: &str, keys: &mut Vec<String>, out: &mut Vec<(String, Vec<String>)>) {
        for (key, value) in obj {
            if key.starts_with('@') {
                continue;
            }
            keys.push(key.clone());
            let path = format!("{prefix}.{key}");
            out.push((path.clone(), keys.clone()));
            if let Value::Object(child) = value {
                walk(child, &path, keys, out);
            }
            keys.pop();
        }
    }
    let mut out = Vec::new();
    if let Value::Object(obj) = instance {
        walk(obj, "$0", &mut Vec::new(), &mut out);
    }
    out
}

/// The value reached by following object keys from the root.
pub fn value_at<'a>(instance: &'a Value, keys: &[String]) -> &'a Value {
    keys.iter().fold(instance, |v, k| &v[k.as_str()])
}

pub fn value_at_mut<'a>(instance: &'a mut Value, keys: &[String]) -> &'a mut Value {
    keys.iter().fold(instance, |v, k| v.get_mut(k.as_str()).expect("key exists"))
}

/// The object holding the last key of `keys`.
pub fn parent_mut<'a>(instance: &'a mut Value, keys: &[String]) -> &'a mut serde_json::Map<String, Value> {
    value_at_mut(instance, &keys[..keys.len() - 1]).as_object_mut().expect("parent is an object")
}

pub fn parse_instance(instance: &Value) -> schemalint_core::annotation::AnnotationGraph {
    let block = schemalint_core::annotation::RawBlock::json_ld(instance.to_string(), 0);
    schemalint_core::annotation::parse_annotation(&block).expect("instance parses").graph
}

/// DS findings (E3xx) as `(path, code)` pairs.
pub fn ds_findings(instance: &Value, ds: &DomainSpecification) -> Vec<(String, String)> {
    let graph = parse_instance(instance);
    schemalint_core::ds::verify_against_ds(&graph, ds, vocab())
        .into_iter()
        .map(|e| (e.path.to_string(), e.code.to_string()))
        .collect()
}

/// The DS property node governing the JSON property at `keys`.
pub fn ds_property<'d>(ds: &'d DomainSpecification, keys: &[String]) -> &'d PropertyNode {
    let mut node = &ds.root;
    let mut found = None;
    for key in keys {
        let property = node.properties.iter().find(|p| &p.name == key).expect("property is in the DS");
        found = Some(property);
        if let Some(nested) = property.ranges.iter().find_map(|r| match r {
            RangeNode::Type { node: Some(n), .. } => Some(n),
            _ => None,
        }) {
            node = nested;
        }
    }
    found.expect("non-empty key path")
}

fn only_wrappers_besides(findings: &[(String, String)], code: &str, path: &str) -> Result<(), String> {
    let hits: Vec<_> = findings.iter().filter(|(_, c)| c == code).collect();
    if hits.len() != 1 || hits[0].0 != path {
        return Err(format!("expected one {code} at {path}, got {findings:?}"));
    }
    match findings.iter().find(|(p, c)| c != code && c != "E305" || (c == "E305" && !path.starts_with(p.as_str()))) {
        Some(other) => Err(format!("unexpected {other:?} beside {code} at {path}")),
        None => Ok(()),
    }
}

/// Synthesized instances comply; deleting a mandatory property yields one
/// E302, duplicating a single-valued one yields one E303, removing an
/// optional one or adding undeclared ones changes nothing.
pub fn check_ds_invariants(ds: &DomainSpecification, rng: &mut StdRng) -> Result<(), String> {
    let vocab = vocab();
    let minimal = schemalint_core::ds::synthesize_instance(ds, vocab, false).map_err(|e| e.to_string())?;
    let full = schemalint_core::ds::synthesize_instance(ds, vocab, true).map_err(|e| e.to_string())?;
    for instance in [&minimal, &full] {
        let findings = ds_findings(instance, ds);
        if !findings.is_empty() {
            return Err(format!("synthesized instance not compliant: {findings:?}\n{instance}"));
        }
    }

    let locations = property_locations(&full);
    if let Some((path, keys)) = locations.iter().filter(|(_, k)| !ds_property(ds, k).is_optional).choose(rng) {
        let mut broken = full.clone();
        parent_mut(&mut broken, keys).remove(keys.last().unwrap());
        only_wrappers_besides(&ds_findings(&broken, ds), "E302", path).map_err(|e| format!("deletion: {e}"))?;
    }

    if let Some((path, keys)) =
        locations.iter().filter(|(_, k)| !ds_property(ds, k).multiple_values_allowed).choose(rng)
    {
        let mut broken = full.clone();
        let slot = value_at_mut(&mut broken, keys);
        *slot = json!([slot.clone(), slot.clone()]);
        only_wrappers_besides(&ds_findings(&broken, ds), "E303", path).map_err(|e| format!("duplication: {e}"))?;
    }

    if let Some((_, keys)) = locations.iter().filter(|(_, k)| ds_property(ds, k).is_optional).choose(rng) {
        let mut trimmed = full.clone();
        parent_mut(&mut trimmed, keys).remove(keys.last().unwrap());
        let findings = ds_findings(&trimmed, ds);
        if !findings.is_empty() {
            return Err(format!("removing optional {keys:?} broke compliance: {findings:?}"));
        }
    }

    let mentioned: BTreeSet<&str> = ds.root.properties.iter().map(|p| p.name.as_str()).collect();
    let mut extended = full.clone();
    let root = extended.as_object_mut().unwrap();
    root.insert("zzUndeclared".into(), json!("x"));
    if let Some(extra) = applicable_properties(vocab, &ds.root.target_types[0])
        .into_iter()
        .filter(|p| !mentioned.contains(p))
        .choose(rng)
    {
        root.insert(extra.to_owned(), json!(["example", {"@type": "Thing", "name": "x"}]));
    }
    let findings = ds_findings(&extended, ds);
    if !findings.is_empty() {
        return Err(format!("undeclared properties were not ignored: {findings:?}"));
    }
    Ok(())
}

const WORDS: [&str; 24] = [
    "alpine", "meadow", "granite", "lantern", "harbor", "velvet", "orchard", "summit", "copper", "willow", "ember",
    "glacier", "saffron", "thicket", "quarry", "juniper", "falcon", "marble", "tundra", "cobalt", "prairie", "canyon",
    "heron", "basalt",
];

/// A random annotated item together with one visible HTML fragment per
/// literal, each fragment carrying exactly the evidence for its value.
pub struct ContentCase {
    pub annotation: Value,
    pub fragments: Vec<String>,
}

pub const CONTENT_BASE: &str = "https://shop.example/";

fn words(rng: &mut StdRng, n: usize) -> String {
    WORDS.choose_multiple(rng, n).copied().collect::<Vec<_>>().join(" ")
}

pub fn random_content_case(rng: &mut StdRng) -> ContentCase {
    let mut fragments = Vec::new();
    let n = rng.gen_range(1..=4);
    let name = words(rng, n);
    fragments.push(format!("<h1>{name}</h1>"));
    let n = rng.gen_range(2..=6);
    let description = words(rng, n);
    fragments.push(format!("<p>{description}</p>"));
    let url = format!("{CONTENT_BASE}events/{}", words(rng, 1));
    fragments.push(format!(r#"<a href="{url}">details</a>"#));
    let image = format!("{CONTENT_BASE}img/{}.jpg", words(rng, 1));
    fragments.push(format!(r#"<img src="{image}" alt="">"#));
    let date = format!("20{:02}-{:02}-{:02}", rng.gen_range(10..30), rng.gen_range(1..=12), rng.gen_range(1..=28));
    fragments.push(format!("<time>{date}</time>"));
    let price = if rng.gen_bool(0.5) {
        json!(rng.gen_range(1..500))
    } else {
        json!(format!("{}.{}", rng.gen_range(1..500), rng.gen_range(1..10)))
    };
    let price_text = price.as_str().map_or_else(|| price.to_string(), str::to_owned);
    fragments.push(format!("<span>EUR {price_text}</span>"));
    let (member, label) =
        *[("InStock", "in stock"), ("SoldOut", "sold out"), ("PreOrder", "pre order")].choose(rng).unwrap();
    fragments.push(format!("<em>{label}</em>"));
    let n = rng.gen_range(1..=3);
    let venue = words(rng, n);
    fragments.push(format!("<address>{venue}</address>"));

    let annotation = json!({
        "@context": "https://schema.org",
        "@type": "Event",
        "name": name,
        "description": description,
        "url": url,
        "image": image,
        "startDate": date,
        "location": {"@type": "Place", "name": venue},
        "offers": {"@type": "Offer", "price": price, "availability": format!("https://schema.org/{member}")},
    });
    ContentCase { annotation, fragments }
}

/// The case's annotation as a JSON-LD script plus the fragments selected by `keep`.
pub fn content_page(case: &ContentCase, keep: &[bool]) -> String {
    let mut html =
        format!("<html><head><script type=\"application/ld+json\">{}</script></head><body>", case.annotation);
    for (fragment, _) in case.fragments.iter().zip(keep).filter(|(_, k)| **k) {
        html.push_str(fragment);
        html.push('\n');
    }
    html.push_str("</body></html>");
    html
}

pub fn content_validation(html: &str) -> schemalint_core::content::ContentValidation {
    use schemalint_core::content::{extract_page_content, validate_annotation_against_page, ValidationConfig};
    let base = url::Url::parse(CONTENT_BASE).unwrap();
    let config = ValidationConfig::default();
    let blocks = schemalint_core::annotation::extract_annotation_blocks(html.as_bytes(), Some(&base));
    let graph = schemalint_core::annotation::parse_annotation(&blocks[0]).expect("case parses").graph;
    let page = extract_page_content(html.as_bytes(), Some(&base), config.extraction_options());
    validate_annotation_against_page(&graph, &page, &config, vocab())
}
