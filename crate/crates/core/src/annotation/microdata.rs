//! Microdata items read from an HTML tree.

use scraper::ElementRef;
use url::Url;

use super::graph::{BuildValue, GraphBuilder, NodeId};
use super::Issue;
use crate::terms::strip_schema_prefix;

/// A top-level item scope and everything nested in it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MicrodataItem {
    pub types: Vec<String>,
    pub id: Option<String>,
    pub properties: Vec<(String, MicrodataValue)>,
    /// The item carried an `itemref` attribute, which is not followed.
    pub has_itemref: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MicrodataValue {
    Item(MicrodataItem),
    Text(String),
}

const LINK_ELEMENTS: [&str; 3] = ["a", "area", "link"];
const MEDIA_ELEMENTS: [&str; 7] = ["img", "audio", "video", "source", "embed", "iframe", "track"];

fn resolve(raw: &str, base: Option<&Url>) -> String {
    let raw = raw.trim();
    match base.map(|b| b.join(raw)) {
        Some(Ok(url)) => url.to_string(),
        _ => raw.to_owned(),
    }
}

fn element_text(el: ElementRef<'_>) -> String {
    el.text().collect::<String>().trim().to_owned()
}

/// Value of a non-item property element: `content` wins, then `href`/`src`
/// of linking and media elements, then `datetime` of time elements, then
/// the trimmed text.
fn property_value(el: ElementRef<'_>, base: Option<&Url>) -> String {
    let element = el.value();
    if let Some(content) = element.attr("content") {
        return content.to_owned();
    }
    let tag = element.name();
    if LINK_ELEMENTS.contains(&tag) {
        if let Some(href) = element.attr("href") {
            return resolve(href, base);
        }
    }
    if MEDIA_ELEMENTS.contains(&tag) {
        if let Some(src) = element.attr("src") {
            return resolve(src, base);
        }
    }
    if tag == "time" {
        if let Some(datetime) = element.attr("datetime") {
            return datetime.to_owned();
        }
    }
    element_text(el)
}

pub(crate) fn read_item(el: ElementRef<'_>, base: Option<&Url>) -> MicrodataItem {
    let element = el.value();
    let mut item = MicrodataItem {
        types: element
            .attr("itemtype")
            .map(|t| t.split_whitespace().map(|s| strip_schema_prefix(s).to_owned()).collect())
            .unwrap_or_default(),
        id: element.attr("itemid").map(|s| s.trim().to_owned()),
        properties: Vec::new(),
        has_itemref: element.attr("itemref").is_some(),
    };
    crawl(el, base, &mut item.properties);
    item
}

fn crawl(el: ElementRef<'_>, base: Option<&Url>, out: &mut Vec<(String, MicrodataValue)>) {
    for child in el.children().filter_map(ElementRef::wrap) {
        let element = child.value();
        let is_scope = element.attr("itemscope").is_some();
        if let Some(names) = element.attr("itemprop") {
            let value = if is_scope {
                MicrodataValue::Item(read_item(child, base))
            } else {
                MicrodataValue::Text(property_value(child, base))
            };
            for name in names.split_whitespace() {
                out.push((strip_schema_prefix(name).to_owned(), value.clone()));
            }
        }
        if !is_scope {
            crawl(child, base, out);
        }
    }
}

/// Whether an element starts a top-level item.
pub(crate) fn is_top_level_item(el: ElementRef<'_>) -> bool {
    el.value().attr("itemscope").is_some() && el.value().attr("itemprop").is_none()
}

pub(crate) fn convert(item: &MicrodataItem, builder: &mut GraphBuilder, issues: &mut Vec<Issue>) -> (NodeId, bool) {
    let (id, merged) = builder.node(item.types.clone(), item.id.clone());
    if item.has_itemref {
        issues.push(Issue::node(id, "itemref is not supported; referenced properties skipped"));
    }
    for (name, value) in &item.properties {
        builder.touch_property(id, name);
        let value = match value {
            MicrodataValue::Text(text) => BuildValue::Literal(text.clone()),
            MicrodataValue::Item(nested) => {
                let (child, merged) = convert(nested, builder, issues);
                match (merged, &nested.id) {
                    (true, Some(iri)) => BuildValue::Reference(iri.clone()),
                    _ => BuildValue::Entity(child),
                }
            }
        };
        builder.push_value(id, name, value);
    }
    (id, merged)
}
