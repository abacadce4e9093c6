//! Scale transformations: node-type coarsening and bipartite one-mode
//! projection.

use std::collections::BTreeMap;

use crate::error::GraphError;
use crate::graph::{LinkRecord, NodeRecord, SemanticGraph};
use crate::ontology::OntologySchema;

/// Attribute recording a node's pre-coarsening type.
pub const ORIGINAL_TYPE_ATTR: &str = "original_type";

/// Total mapping from original node types to coarse node types. Types
/// absent from the map are treated as errors by [`coarsen`], not mapped to
/// themselves, so that typos surface.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TypeMergeMap {
    map: BTreeMap<String, String>,
}

impl TypeMergeMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// The identity map over the schema's node types.
    pub fn identity(schema: &OntologySchema) -> Self {
        let mut m = Self::new();
        for t in schema.node_types() {
            m.insert(t, t);
        }
        m
    }

    pub fn insert(&mut self, from: impl Into<String>, to: impl Into<String>) {
        self.map.insert(from.into(), to.into());
    }

    pub fn target(&self, from: &str) -> Option<&str> {
        self.map.get(from).map(String::as_str)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.map.iter().map(|(a, b)| (a.as_str(), b.as_str()))
    }
}

/// Relabel node types through the merge map. Nodes keep their identity;
/// only types aggregate. Each relabeled node records its original type
/// under [`ORIGINAL_TYPE_ATTR`]; unchanged nodes are untouched, so an
/// identity map returns an equal graph.
pub fn coarsen(
    graph: &SemanticGraph,
    schema: &OntologySchema,
    merge: &TypeMergeMap,
) -> Result<(SemanticGraph, OntologySchema), GraphError> {
    for t in schema.node_types() {
        if merge.target(t).is_none() {
            return Err(GraphError::MergeMapIncomplete(t.to_string()));
        }
    }

    let mut coarse_schema = OntologySchema::new();
    for t in schema.node_types() {
        coarse_schema.declare_node_type(merge.target(t).unwrap());
    }
    for l in schema.link_types() {
        coarse_schema.declare_link_type(l);
    }
    for (s, l, t) in schema.allowed_triples() {
        coarse_schema.allow(merge.target(s).unwrap(), l, merge.target(t).unwrap())?;
    }

    let nodes: Vec<NodeRecord> = graph
        .nodes()
        .iter()
        .map(|n| {
            let target = merge
                .target(&n.node_type)
                .ok_or_else(|| GraphError::MergeMapIncomplete(n.node_type.clone()))?;
            let mut node = n.clone();
            if target != n.node_type {
                node.attributes
                    .insert(ORIGINAL_TYPE_ATTR.to_string(), n.node_type.clone());
                node.node_type = target.to_string();
            }
            Ok(node)
        })
        .collect::<Result<_, GraphError>>()?;

    let graph = crate::graph::build_graph(nodes, graph.links().to_vec(), &coarse_schema)?;
    Ok((graph, coarse_schema))
}

/// Link type given to projected links: `shares-<via_type>`.
pub fn projection_link_type(via_type: &str) -> String {
    format!("shares-{via_type}")
}

/// Schema the output of [`one_mode_projection`] conforms to.
pub fn projection_schema(keep_type: &str, via_type: &str) -> OntologySchema {
    OntologySchema::complete([keep_type], &projection_link_type(via_type))
}

/// Collapse a two-type bipartite graph onto `keep_type`: kept nodes are
/// linked when they share at least one `via_type` neighbor. The projected
/// link records how many via nodes are shared (`shared_count`) and which
/// (`via`, `|`-separated ids). Links touching node types other than the two
/// named are outside the projected subgraph and are ignored.
pub fn one_mode_projection(
    graph: &SemanticGraph,
    keep_type: &str,
    via_type: &str,
) -> Result<SemanticGraph, GraphError> {
    if keep_type == via_type {
        return Err(GraphError::ProjectionSameType(keep_type.to_string()));
    }
    for link in graph.links() {
        let st = &graph.node(&link.source)?.node_type;
        let tt = &graph.node(&link.target)?.node_type;
        let s_in = st == keep_type || st == via_type;
        let t_in = tt == keep_type || tt == via_type;
        if s_in && t_in && st == tt {
            return Err(GraphError::NotBipartite {
                a: link.source.clone(),
                b: link.target.clone(),
                node_type: st.clone(),
            });
        }
    }

    let nodes: Vec<NodeRecord> = graph
        .nodes()
        .iter()
        .filter(|n| n.node_type == keep_type)
        .cloned()
        .collect();

    // shared via nodes per kept pair
    let mut shared: BTreeMap<(String, String), Vec<String>> = BTreeMap::new();
    for via in graph.nodes().iter().filter(|n| n.node_type == via_type) {
        let mut kept: Vec<&str> = graph
            .neighbors(&via.id)?
            .into_iter()
            .filter(|id| graph.node(id).map(|n| n.node_type == keep_type).unwrap_or(false))
            .collect();
        kept.sort();
        for (x, u) in kept.iter().enumerate() {
            for v in &kept[x + 1..] {
                shared
                    .entry((u.to_string(), v.to_string()))
                    .or_default()
                    .push(via.id.clone());
            }
        }
    }

    let link_type = projection_link_type(via_type);
    let links: Vec<LinkRecord> = shared
        .into_iter()
        .map(|((u, v), vias)| {
            LinkRecord::new(u, v, link_type.clone())
                .with_attr("shared_count", vias.len().to_string())
                .with_attr("via", vias.join("|"))
        })
        .collect();

    let schema = projection_schema(keep_type, via_type);
    crate::graph::build_graph(nodes, links, &schema)
}
