use std::collections::{BTreeMap, BTreeSet};

use chrono::NaiveDate;
use ego_tree::NodeRef;
use regex::Regex;
use scraper::{ElementRef, Html, Node};
use std::sync::OnceLock;
use url::Url;

use super::normalize::{normalize_url, scan_dates, scan_numbers, tokenize, DateOrder, DecimalSeparator};

/// Elements whose content never reaches the reader. Annotation scripts are
/// among them, so an annotation cannot corroborate itself.
const HIDDEN: [&str; 5] = ["script", "style", "template", "noscript", "head"];

/// Elements that do not break words when text runs are joined.
const INLINE: [&str; 22] = [
    "a", "abbr", "b", "bdi", "bdo", "cite", "code", "data", "dfn", "em", "font", "i", "kbd", "mark", "q", "s", "samp",
    "small", "span", "strong", "sub", "sup",
];

const IMAGE_ELEMENTS: [&str; 2] = ["img", "source"];
const SOURCE_ELEMENTS: [&str; 6] = ["audio", "video", "embed", "iframe", "track", "script"];

/// The visible surface of a page.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PageContent {
    /// Visible text, words separated by single spaces.
    pub text: String,
    pub text_tokens: BTreeSet<String>,
    pub token_counts: BTreeMap<String, usize>,
    pub urls: BTreeSet<String>,
    pub image_urls: BTreeSet<String>,
    pub dates: BTreeSet<NaiveDate>,
    pub numbers: BTreeSet<String>,
    pub base_url: Option<Url>,
}

/// Options that affect how page text is read.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ExtractionOptions {
    pub date_order: DateOrder,
    pub decimal_separator: DecimalSeparator,
}

fn url_in_text_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r#"https?://[^\s<>"']+"#).unwrap())
}

/// Parses `html` leniently and collects its visible text, links, image
/// sources, dates and numbers.
pub fn extract_page_content(html: &[u8], base_url: Option<&Url>, options: ExtractionOptions) -> PageContent {
    let document = Html::parse_document(&String::from_utf8_lossy(html));
    let mut page = PageContent { base_url: base_url.cloned(), ..PageContent::default() };
    let mut text = String::new();
    collect(document.tree.root(), &mut text, &mut page, base_url);
    if let Some(title) =
        document.root_element().descendants().filter_map(ElementRef::wrap).find(|e| e.value().name() == "title")
    {
        text.insert_str(0, &format!("{} ", title.text().collect::<String>()));
    }

    page.text = text.split_whitespace().collect::<Vec<_>>().join(" ");
    for token in tokenize(&page.text) {
        *page.token_counts.entry(token.clone()).or_default() += 1;
        page.text_tokens.insert(token);
    }
    for found in url_in_text_regex().find_iter(&page.text) {
        let raw = found.as_str().trim_end_matches(['.', ',', ';', ':', ')', '!', '?']);
        page.urls.extend(normalize_url(raw, None));
    }
    page.dates.extend(scan_dates(&page.text, options.date_order));
    page.numbers.extend(scan_numbers(&page.text, options.decimal_separator));
    page
}

fn collect(node: NodeRef<'_, Node>, text: &mut String, page: &mut PageContent, base: Option<&Url>) {
    match node.value() {
        Node::Text(t) => text.push_str(t),
        Node::Element(element) => {
            let name = element.name();
            // Hidden microdata carriers hold annotation values, not page content.
            let annotation_carrier = matches!(name, "meta" | "link") && element.attr("itemprop").is_some();
            if !annotation_carrier {
                if let Some(href) = element.attr("href") {
                    page.urls.extend(normalize_url(href, base));
                }
                if let Some(src) = element.attr("src") {
                    if IMAGE_ELEMENTS.contains(&name) {
                        page.image_urls.extend(normalize_url(src, base));
                    } else if SOURCE_ELEMENTS.contains(&name) {
                        page.urls.extend(normalize_url(src, base));
                    }
                }
                if IMAGE_ELEMENTS.contains(&name) {
                    if let Some(srcset) = element.attr("srcset") {
                        for candidate in srcset.split(',') {
                            if let Some(src) = candidate.split_whitespace().next() {
                                page.image_urls.extend(normalize_url(src, base));
                            }
                        }
                    }
                }
            }
            if HIDDEN.contains(&name) || element.attr("hidden").is_some() {
                return;
            }
            let breaks = !INLINE.contains(&name);
            if breaks {
                text.push(' ');
            }
            for child in node.children() {
                collect(child, text, page, base);
            }
            if breaks {
                text.push(' ');
            }
        }
        _ => {
            for child in node.children() {
                collect(child, text, page, base);
            }
        }
    }
}
