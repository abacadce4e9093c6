//! Text-file ingestion and canonical export.
//!
//! Three line-oriented grammars, all UTF-8 with `#` comment lines:
//!
//! * schema files: `nodetype NAME`, `linktype NAME`, `allow SRC,LINK,DST`
//!   directives; `allow` registers both orientations;
//! * node files: comma-separated with a header line, columns
//!   `id,type[,attributes...]`;
//! * link files: comma-separated with a header line, columns
//!   `source,target,type[,attributes...]`.
//!
//! Attribute cells hold `key=value` pairs separated by `;`. Identifiers,
//! types, attribute keys and values must not contain `,`, `;`, `=` or
//! newlines, and must not start with `#` or `[`.
//!
//! A whole graph round-trips through a single canonical document with
//! `[schema]`, `[nodes]` and `[links]` sections, each using the grammar
//! above with rows sorted, so equal graphs export to equal bytes.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{build_graph, LinkRecord, NodeRecord, SemanticGraph};
use crate::ontology::OntologySchema;
use crate::transform::TypeMergeMap;

/// A malformed input file, pinned to a 1-based line.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{file}:{line}: {message}")]
pub struct FileFormatError {
    pub file: String,
    pub line: usize,
    pub message: String,
}

impl FileFormatError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        Self {
            file: "<input>".to_string(),
            line,
            message: message.into(),
        }
    }

    /// Attach the originating file name (parsers default to `<input>`).
    pub fn with_file(mut self, file: impl Into<String>) -> Self {
        self.file = file.into();
        self
    }
}

fn is_comment_or_blank(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('#')
}

fn check_cell(value: &str, what: &str, line: usize) -> Result<(), FileFormatError> {
    if value.is_empty() {
        return Err(FileFormatError::at(line, format!("missing {what}")));
    }
    if value.contains([',', ';', '=', '\n']) || value.starts_with(['#', '[']) {
        return Err(FileFormatError::at(
            line,
            format!("{what} `{value}` contains a reserved character"),
        ));
    }
    Ok(())
}

fn parse_attr_cells(
    cells: &[&str],
    line: usize,
) -> Result<BTreeMap<String, String>, FileFormatError> {
    let mut attrs = BTreeMap::new();
    for cell in cells {
        let cell = cell.trim();
        if cell.is_empty() {
            continue;
        }
        for pair in cell.split(';') {
            let pair = pair.trim();
            if pair.is_empty() {
                continue;
            }
            let (key, value) = pair.split_once('=').ok_or_else(|| {
                FileFormatError::at(line, format!("attribute `{pair}` is not key=value"))
            })?;
            let key = key.trim();
            if key.is_empty() {
                return Err(FileFormatError::at(line, "empty attribute key"));
            }
            attrs.insert(key.to_string(), value.trim().to_string());
        }
    }
    Ok(attrs)
}

/// Parse a schema file.
pub fn parse_ontology(text: &str) -> Result<OntologySchema, FileFormatError> {
    parse_ontology_lines(text.lines().enumerate().map(|(i, l)| (i + 1, l)))
}

fn parse_ontology_lines<'a>(
    lines: impl Iterator<Item = (usize, &'a str)>,
) -> Result<OntologySchema, FileFormatError> {
    let mut schema = OntologySchema::new();
    for (lineno, raw) in lines {
        if is_comment_or_blank(raw) {
            continue;
        }
        let line = raw.trim();
        let (directive, rest) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| FileFormatError::at(lineno, format!("malformed directive `{line}`")))?;
        let rest = rest.trim();
        match directive {
            "nodetype" => {
                check_cell(rest, "node type", lineno)?;
                schema.declare_node_type(rest);
            }
            "linktype" => {
                check_cell(rest, "link type", lineno)?;
                schema.declare_link_type(rest);
            }
            "allow" => {
                let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
                if parts.len() != 3 {
                    return Err(FileFormatError::at(
                        lineno,
                        format!("allow expects `source,link,target`, got `{rest}`"),
                    ));
                }
                schema
                    .allow(parts[0], parts[1], parts[2])
                    .map_err(|e| FileFormatError::at(lineno, e.to_string()))?;
            }
            other => {
                return Err(FileFormatError::at(
                    lineno,
                    format!("unknown directive `{other}`"),
                ))
            }
        }
    }
    Ok(schema)
}

/// Parse a node file into records. The first non-comment line is a header.
pub fn parse_nodes(text: &str) -> Result<Vec<NodeRecord>, FileFormatError> {
    parse_node_lines(text.lines().enumerate().map(|(i, l)| (i + 1, l)))
}

fn parse_node_lines<'a>(
    lines: impl Iterator<Item = (usize, &'a str)>,
) -> Result<Vec<NodeRecord>, FileFormatError> {
    let mut out: Vec<NodeRecord> = Vec::new();
    let mut seen_header = false;
    let mut seen_ids: std::collections::HashSet<String> = std::collections::HashSet::new();
    for (lineno, raw) in lines {
        if is_comment_or_blank(raw) {
            continue;
        }
        if !seen_header {
            seen_header = true;
            continue;
        }
        let cells: Vec<&str> = raw.split(',').collect();
        if cells.len() < 2 {
            return Err(FileFormatError::at(
                lineno,
                format!("node row needs at least id,type, got `{}`", raw.trim()),
            ));
        }
        let id = cells[0].trim();
        let node_type = cells[1].trim();
        check_cell(id, "node id", lineno)?;
        check_cell(node_type, "node type", lineno)?;
        if !seen_ids.insert(id.to_string()) {
            return Err(FileFormatError::at(
                lineno,
                format!("duplicate node id `{id}`"),
            ));
        }
        out.push(NodeRecord {
            id: id.to_string(),
            node_type: node_type.to_string(),
            attributes: parse_attr_cells(&cells[2..], lineno)?,
        });
    }
    Ok(out)
}

/// Parse a link file into records. The first non-comment line is a header.
pub fn parse_links(text: &str) -> Result<Vec<LinkRecord>, FileFormatError> {
    parse_link_lines(text.lines().enumerate().map(|(i, l)| (i + 1, l)))
}

fn parse_link_lines<'a>(
    lines: impl Iterator<Item = (usize, &'a str)>,
) -> Result<Vec<LinkRecord>, FileFormatError> {
    let mut out = Vec::new();
    let mut seen_header = false;
    for (lineno, raw) in lines {
        if is_comment_or_blank(raw) {
            continue;
        }
        if !seen_header {
            seen_header = true;
            continue;
        }
        let cells: Vec<&str> = raw.split(',').collect();
        if cells.len() < 3 {
            return Err(FileFormatError::at(
                lineno,
                format!("link row needs source,target,type, got `{}`", raw.trim()),
            ));
        }
        let source = cells[0].trim();
        let target = cells[1].trim();
        let link_type = cells[2].trim();
        check_cell(source, "link source", lineno)?;
        check_cell(target, "link target", lineno)?;
        check_cell(link_type, "link type", lineno)?;
        out.push(LinkRecord {
            source: source.to_string(),
            target: target.to_string(),
            link_type: link_type.to_string(),
            attributes: parse_attr_cells(&cells[3..], lineno)?,
        });
    }
    Ok(out)
}

/// Parse a merge-map file of `old=new` lines.
pub fn parse_merge_map(text: &str) -> Result<TypeMergeMap, FileFormatError> {
    let mut map = TypeMergeMap::new();
    for (lineno, raw) in text.lines().enumerate().map(|(i, l)| (i + 1, l)) {
        if is_comment_or_blank(raw) {
            continue;
        }
        let line = raw.trim();
        let (old, new) = line.split_once('=').ok_or_else(|| {
            FileFormatError::at(lineno, format!("expected `old=new`, got `{line}`"))
        })?;
        let (old, new) = (old.trim(), new.trim());
        check_cell(old, "source type", lineno)?;
        check_cell(new, "merged type", lineno)?;
        map.insert(old, new);
    }
    Ok(map)
}

fn render_attrs(attrs: &BTreeMap<String, String>) -> String {
    attrs
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";")
}

/// Serialize a graph and its schema to the canonical document form.
///
/// Rows are sorted so that two graphs with equal record sets export to
/// identical bytes; `parse_graph_document` reverses this exactly.
pub fn export_graph(graph: &SemanticGraph, schema: &OntologySchema) -> String {
    let mut out = String::new();
    out.push_str("[schema]\n");
    for t in schema.node_types() {
        out.push_str(&format!("nodetype {t}\n"));
    }
    for t in schema.link_types() {
        out.push_str(&format!("linktype {t}\n"));
    }
    for (s, l, t) in schema.allowed_triples() {
        out.push_str(&format!("allow {s},{l},{t}\n"));
    }

    out.push_str("[nodes]\nid,type,attributes\n");
    let mut nodes: Vec<&NodeRecord> = graph.nodes().iter().collect();
    nodes.sort_by(|a, b| a.id.cmp(&b.id));
    for n in nodes {
        out.push_str(&format!(
            "{},{},{}\n",
            n.id,
            n.node_type,
            render_attrs(&n.attributes)
        ));
    }

    out.push_str("[links]\nsource,target,type,attributes\n");
    let mut links: Vec<String> = graph
        .links()
        .iter()
        .map(|l| {
            format!(
                "{},{},{},{}",
                l.source,
                l.target,
                l.link_type,
                render_attrs(&l.attributes)
            )
        })
        .collect();
    links.sort();
    for l in links {
        out.push_str(&l);
        out.push('\n');
    }
    out
}

/// Split a canonical document into its schema, node and link parts.
pub fn parse_graph_document(
    text: &str,
) -> Result<(OntologySchema, Vec<NodeRecord>, Vec<LinkRecord>), FileFormatError> {
    #[derive(PartialEq, Clone, Copy)]
    enum Section {
        None,
        Schema,
        Nodes,
        Links,
    }
    let mut section = Section::None;
    let mut schema_lines = Vec::new();
    let mut node_lines = Vec::new();
    let mut link_lines = Vec::new();
    for (lineno, raw) in text.lines().enumerate().map(|(i, l)| (i + 1, l)) {
        match raw.trim() {
            "[schema]" => section = Section::Schema,
            "[nodes]" => section = Section::Nodes,
            "[links]" => section = Section::Links,
            _ => match section {
                Section::None => {
                    if !is_comment_or_blank(raw) {
                        return Err(FileFormatError::at(
                            lineno,
                            "content before the first section header",
                        ));
                    }
                }
                Section::Schema => schema_lines.push((lineno, raw)),
                Section::Nodes => node_lines.push((lineno, raw)),
                Section::Links => link_lines.push((lineno, raw)),
            },
        }
    }
    let schema = parse_ontology_lines(schema_lines.into_iter())?;
    let nodes = parse_node_lines(node_lines.into_iter())?;
    let links = parse_link_lines(link_lines.into_iter())?;
    Ok((schema, nodes, links))
}

/// Parse a canonical document and build the graph it describes.
pub fn import_graph(text: &str) -> Result<(SemanticGraph, OntologySchema), FileFormatError> {
    let (schema, nodes, links) = parse_graph_document(text)?;
    let graph = build_graph(nodes, links, &schema)
        .map_err(|e| FileFormatError::at(1, e.to_string()))?;
    Ok((graph, schema))
}
