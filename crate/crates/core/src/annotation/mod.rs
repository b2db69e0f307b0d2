//! Annotation blocks: extraction from HTML and parsing into
//! [`AnnotationGraph`]s.

mod graph;
mod jsonld;
mod literal;
mod microdata;
mod path;

use scraper::{ElementRef, Html};
use url::Url;

pub use graph::{AnnotationGraph, AnnotationNode, NodeId, PropertyValue, Resolved, SourceFormat, ValueKind};
pub use literal::{classify_literal, LiteralType};
pub use microdata::{MicrodataItem, MicrodataValue};
pub use path::{AnnotationPath, PathParseError, PathSegment};

pub(crate) use literal::parse_iso_date;

use crate::report::{ErrorCode, ReportEntry};
use graph::GraphBuilder;

const JSON_LD_MEDIA_TYPE: &str = "application/ld+json";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockContent {
    /// Source text of a JSON-LD script element or standalone file.
    JsonLd(String),
    /// A top-level Microdata item, read out of the page.
    Microdata(MicrodataItem),
}

/// One annotation block as found on a page, not yet parsed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawBlock {
    pub block_index: usize,
    pub content: BlockContent,
}

impl RawBlock {
    pub fn json_ld(text: impl Into<String>, block_index: usize) -> Self {
        Self { block_index, content: BlockContent::JsonLd(text.into()) }
    }

    pub fn source_format(&self) -> SourceFormat {
        match self.content {
            BlockContent::JsonLd(_) => SourceFormat::JsonLd,
            BlockContent::Microdata(_) => SourceFormat::Microdata,
        }
    }
}

fn is_json_ld_script(el: ElementRef<'_>) -> bool {
    el.value().name() == "script"
        && el.value().attr("type").is_some_and(|t| {
            t.split(';').next().is_some_and(|media| media.trim().eq_ignore_ascii_case(JSON_LD_MEDIA_TYPE))
        })
}

/// Finds every annotation block of a page: JSON-LD scripts in document
/// order, then one block per top-level Microdata item. Indices are
/// zero-based across both kinds.
pub fn extract_annotation_blocks(html: &[u8], base_url: Option<&Url>) -> Vec<RawBlock> {
    let document = Html::parse_document(&String::from_utf8_lossy(html));
    let elements: Vec<ElementRef<'_>> = document.root_element().descendants().filter_map(ElementRef::wrap).collect();

    let scripts =
        elements.iter().filter(|el| is_json_ld_script(**el)).map(|el| BlockContent::JsonLd(el.text().collect()));
    let items = elements
        .iter()
        .filter(|el| microdata::is_top_level_item(**el))
        .map(|el| BlockContent::Microdata(microdata::read_item(*el, base_url)));

    scripts.chain(items).enumerate().map(|(block_index, content)| RawBlock { block_index, content }).collect()
}

/// Where a parse issue occurred; resolved to a path once the graph is built.
#[derive(Debug, Clone)]
pub(crate) enum IssueLocation {
    Block,
    Node(NodeId),
    Property(NodeId, String),
}

#[derive(Debug, Clone)]
pub(crate) struct Issue {
    location: IssueLocation,
    message: String,
}

impl Issue {
    pub fn block(message: impl Into<String>) -> Self {
        Self { location: IssueLocation::Block, message: message.into() }
    }

    pub fn node(node: NodeId, message: impl Into<String>) -> Self {
        Self { location: IssueLocation::Node(node), message: message.into() }
    }

    pub fn property(node: NodeId, property: &str, message: impl Into<String>) -> Self {
        Self { location: IssueLocation::Property(node, property.to_owned()), message: message.into() }
    }

    fn path(&self, graph: &AnnotationGraph) -> AnnotationPath {
        match &self.location {
            IssueLocation::Block => AnnotationPath::block(),
            IssueLocation::Node(id) => graph.node(*id).path.clone(),
            IssueLocation::Property(id, name) => graph.node(*id).path.property(name),
        }
    }
}

/// A successfully parsed block with its non-fatal parse warnings (E103).
#[derive(Debug, Clone)]
pub struct ParsedBlock {
    pub graph: AnnotationGraph,
    pub warnings: Vec<ReportEntry>,
}

/// Parses a raw block. Fails with E101 when the block is not well-formed
/// and with E102 when it holds no typed node; E103 warnings for skipped
/// constructs accompany either outcome.
pub fn parse_annotation(block: &RawBlock) -> Result<ParsedBlock, Vec<ReportEntry>> {
    let index = block.block_index;
    let mut builder = GraphBuilder::default();
    let mut issues = Vec::new();

    match &block.content {
        BlockContent::JsonLd(text) => {
            let doc: serde_json::Value = match serde_json::from_str(text.trim_start_matches('\u{feff}')) {
                Ok(doc) => doc,
                Err(e) => {
                    return Err(vec![ReportEntry::new(
                        ErrorCode::InvalidSyntax,
                        AnnotationPath::block(),
                        format!("JSON-LD block does not parse: {e}"),
                    )
                    .in_block(index)])
                }
            };
            jsonld::JsonLdConverter::new(&mut builder, &mut issues).document(&doc);
        }
        BlockContent::Microdata(item) => {
            let (id, _) = microdata::convert(item, &mut builder, &mut issues);
            builder.add_root(id);
        }
    }

    let graph = builder.finish(index, block.source_format());
    let warnings: Vec<ReportEntry> = issues
        .iter()
        .map(|issue| {
            ReportEntry::new(ErrorCode::UnsupportedConstruct, issue.path(&graph), &issue.message).in_block(index)
        })
        .collect();

    if !graph.has_typed_node() {
        let mut entries = vec![ReportEntry::new(
            ErrorCode::EmptyAnnotation,
            AnnotationPath::block(),
            "the block contains no typed node",
        )
        .in_block(index)];
        entries.extend(warnings);
        return Err(entries);
    }
    Ok(ParsedBlock { graph, warnings })
}
