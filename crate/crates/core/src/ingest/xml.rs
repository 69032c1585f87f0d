//! XML family mapping: element local names become path segments,
//! attributes become `@name` segments and text content becomes the value.

use roxmltree::{Document, Node};

use super::{
    add_field, Dataset, DatasetBuilder, FileFormat, IngestError, ParseOptions, Record, Value,
};
use crate::standard::FeaturePath;

pub(super) fn parse(
    format: FileFormat,
    text: &str,
    options: &ParseOptions,
) -> Result<Dataset, IngestError> {
    let document = Document::parse(text).map_err(|e| IngestError::Parse(e.to_string()))?;
    let root = document.root_element();

    let record_nodes = match options.root_segments().as_slice() {
        [] => default_records(root),
        [parents @ .., last] => {
            let mut node = root;
            for name in parents {
                node = elements(node)
                    .find(|c| c.tag_name().name() == *name)
                    .ok_or_else(|| {
                        IngestError::Parse(format!("record root element {name:?} not found"))
                    })?;
            }
            elements(node)
                .filter(|c| c.tag_name().name() == *last)
                .collect()
        }
    };

    let mut builder = DatasetBuilder::default();
    for node in record_nodes {
        let mut record = Record::new();
        flatten_element(&mut record, None, node);
        builder.push(record);
    }
    Ok(builder.finish(format))
}

fn elements<'a, 'input>(node: Node<'a, 'input>) -> impl Iterator<Item = Node<'a, 'input>> {
    node.children().filter(Node::is_element)
}

/// Records are the most repeated child element of the document element.
/// Single-child wrappers (e.g. a KML `Document`) are descended through when
/// the wrapper itself holds repeated children.
fn default_records<'a, 'input>(root: Node<'a, 'input>) -> Vec<Node<'a, 'input>> {
    let mut node = root;
    loop {
        let children: Vec<_> = elements(node).collect();
        if let Some(name) = most_repeated(&children) {
            return children
                .into_iter()
                .filter(|c| c.tag_name().name() == name)
                .collect();
        }
        match children.as_slice() {
            [only] if most_repeated(&elements(*only).collect::<Vec<_>>()).is_some() => node = *only,
            _ => return children,
        }
    }
}

fn most_repeated<'a>(children: &[Node<'a, '_>]) -> Option<&'a str> {
    let mut counts: Vec<(&str, usize)> = Vec::new();
    for child in children {
        let name = child.tag_name().name();
        match counts.iter_mut().find(|(n, _)| *n == name) {
            Some((_, c)) => *c += 1,
            None => counts.push((name, 1)),
        }
    }
    let mut best: Option<(&str, usize)> = None;
    for (name, count) in counts {
        if count >= 2 && best.is_none_or(|(_, b)| count > b) {
            best = Some((name, count));
        }
    }
    best.map(|(name, _)| name)
}

fn segment(prefix: Option<&FeaturePath>, name: &str) -> FeaturePath {
    let tail =
        FeaturePath::lenient(name).unwrap_or_else(|| FeaturePath::parse("_").expect("static path"));
    match prefix {
        Some(p) => p.join(&tail),
        None => tail,
    }
}

fn flatten_element(record: &mut Record, prefix: Option<&FeaturePath>, node: Node) {
    for attribute in node.attributes() {
        let path = segment(prefix, &format!("@{}", attribute.name()));
        add_field(record, path, Value::text(attribute.value()));
    }
    for child in elements(node) {
        let path = segment(prefix, child.tag_name().name());
        let has_children = elements(child).next().is_some();
        if !has_children {
            let text: String = child
                .children()
                .filter(|n| n.is_text())
                .filter_map(|n| n.text())
                .collect();
            let text = text.trim();
            if !text.is_empty() || child.attributes().len() == 0 {
                add_field(record, path.clone(), Value::text(text));
            }
        }
        flatten_element(record, Some(&path), child);
    }
}
