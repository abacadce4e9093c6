//! Typed multigraph with attributes.
//!
//! Links are stored with their declared direction but every measure in this
//! crate traverses them undirected. Parallel links between the same pair are
//! kept as separate records and collapse to a single neighbor for degree,
//! clustering and path purposes. Self-loops are rejected at build time.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::GraphError;
use crate::ontology::OntologySchema;

/// A typed node with opaque string attributes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeRecord {
    pub id: String,
    pub node_type: String,
    pub attributes: BTreeMap<String, String>,
}

impl NodeRecord {
    pub fn new(id: impl Into<String>, node_type: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            node_type: node_type.into(),
            attributes: BTreeMap::new(),
        }
    }

    pub fn with_attr(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.attributes.insert(key.into(), value.into());
        self
    }
}

/// A typed link between two nodes, stored directed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkRecord {
    pub source: String,
    pub target: String,
    pub link_type: String,
    pub attributes: BTreeMap<String, String>,
}

impl LinkRecord {
    pub fn new(
        source: impl Into<String>,
        target: impl Into<String>,
        link_type: impl Into<String>,
    ) -> Self {
        Self {
            source: source.into(),
            target: target.into(),
            link_type: link_type.into(),
            attributes: BTreeMap::new(),
        }
    }

    pub fn with_attr(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.attributes.insert(key.into(), value.into());
        self
    }
}

/// One adjacency entry: a neighbor plus the indices of every link record
/// joining the two nodes (either orientation).
#[derive(Debug, Clone)]
struct Adjacent {
    node: usize,
    links: Vec<usize>,
}

/// Immutable typed multigraph with an undirected adjacency index.
#[derive(Debug, Clone)]
pub struct SemanticGraph {
    nodes: Vec<NodeRecord>,
    links: Vec<LinkRecord>,
    id_index: HashMap<String, usize>,
    adjacency: Vec<Vec<Adjacent>>,
    type_counts: BTreeMap<String, usize>,
}

/// Build a graph from records. The schema seeds the per-type counts so that
/// declared-but-empty types report a count of zero; no link conformance is
/// checked here (see [`validate`]).
pub fn build_graph(
    nodes: Vec<NodeRecord>,
    links: Vec<LinkRecord>,
    schema: &OntologySchema,
) -> Result<SemanticGraph, GraphError> {
    let mut type_counts: BTreeMap<String, usize> = BTreeMap::new();
    for t in schema.node_types() {
        type_counts.insert(t.to_string(), 0);
    }
    SemanticGraph::assemble(nodes, links, type_counts)
}

/// Report every schema violation in the graph. An empty result means the
/// graph conforms. Violations are data, not errors.
pub fn validate(graph: &SemanticGraph, schema: &OntologySchema) -> Vec<Violation> {
    let mut out = Vec::new();
    for node in graph.nodes() {
        if !schema.has_node_type(&node.node_type) {
            out.push(Violation::UndeclaredNodeType {
                node: node.id.clone(),
                node_type: node.node_type.clone(),
            });
        }
    }
    for link in graph.links() {
        let source_type = &graph.node_by_id(&link.source).node_type;
        let target_type = &graph.node_by_id(&link.target).node_type;
        if !schema.has_link_type(&link.link_type) {
            out.push(Violation::UndeclaredLinkType {
                source: link.source.clone(),
                target: link.target.clone(),
                link_type: link.link_type.clone(),
            });
        } else if !schema.is_allowed(source_type, &link.link_type, target_type) {
            out.push(Violation::DisallowedLink {
                source: link.source.clone(),
                target: link.target.clone(),
                link_type: link.link_type.clone(),
                source_type: source_type.clone(),
                target_type: target_type.clone(),
            });
        }
    }
    out
}

/// A single schema violation found by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    UndeclaredNodeType {
        node: String,
        node_type: String,
    },
    UndeclaredLinkType {
        source: String,
        target: String,
        link_type: String,
    },
    DisallowedLink {
        source: String,
        target: String,
        link_type: String,
        source_type: String,
        target_type: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UndeclaredNodeType { node, node_type } => {
                write!(f, "node `{node}` has undeclared type `{node_type}`")
            }
            Violation::UndeclaredLinkType {
                source,
                target,
                link_type,
            } => write!(
                f,
                "link {source}-{target} has undeclared link type `{link_type}`"
            ),
            Violation::DisallowedLink {
                source,
                target,
                link_type,
                source_type,
                target_type,
            } => write!(
                f,
                "link {source}-{target} of type `{link_type}` is not allowed between `{source_type}` and `{target_type}`"
            ),
        }
    }
}

impl SemanticGraph {
    /// Build without schema knowledge; per-type counts cover present types
    /// only. Used by transforms and generators that produce their own types.
    pub(crate) fn assemble_untyped(
        nodes: Vec<NodeRecord>,
        links: Vec<LinkRecord>,
    ) -> Result<Self, GraphError> {
        SemanticGraph::assemble(nodes, links, BTreeMap::new())
    }

    fn assemble(
        nodes: Vec<NodeRecord>,
        links: Vec<LinkRecord>,
        mut type_counts: BTreeMap<String, usize>,
    ) -> Result<Self, GraphError> {
        let mut id_index = HashMap::with_capacity(nodes.len());
        for (i, node) in nodes.iter().enumerate() {
            if id_index.insert(node.id.clone(), i).is_some() {
                return Err(GraphError::DuplicateNodeId(node.id.clone()));
            }
            *type_counts.entry(node.node_type.clone()).or_insert(0) += 1;
        }

        let mut neighbor_maps: Vec<BTreeMap<usize, Vec<usize>>> =
            vec![BTreeMap::new(); nodes.len()];
        for (li, link) in links.iter().enumerate() {
            let s = *id_index
                .get(&link.source)
                .ok_or_else(|| GraphError::MissingEndpoint(link.source.clone()))?;
            let t = *id_index
                .get(&link.target)
                .ok_or_else(|| GraphError::MissingEndpoint(link.target.clone()))?;
            if s == t {
                return Err(GraphError::SelfLoop(link.source.clone()));
            }
            neighbor_maps[s].entry(t).or_default().push(li);
            neighbor_maps[t].entry(s).or_default().push(li);
        }

        let adjacency = neighbor_maps
            .into_iter()
            .map(|m| {
                m.into_iter()
                    .map(|(node, links)| Adjacent { node, links })
                    .collect()
            })
            .collect();

        Ok(Self {
            nodes,
            links,
            id_index,
            adjacency,
            type_counts,
        })
    }

    /// Total node count.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Number of stored link records (parallel links counted separately).
    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn nodes(&self) -> &[NodeRecord] {
        &self.nodes
    }

    pub fn links(&self) -> &[LinkRecord] {
        &self.links
    }

    pub fn contains(&self, id: &str) -> bool {
        self.id_index.contains_key(id)
    }

    pub fn node(&self, id: &str) -> Result<&NodeRecord, GraphError> {
        self.resolve(id).map(|i| &self.nodes[i])
    }

    /// Per-type node counts. Types declared in the schema at build time are
    /// present even when empty.
    pub fn type_counts(&self) -> &BTreeMap<String, usize> {
        &self.type_counts
    }

    pub fn count_of_type(&self, node_type: &str) -> usize {
        self.type_counts.get(node_type).copied().unwrap_or(0)
    }

    /// Number of distinct neighbors.
    pub fn degree(&self, id: &str) -> Result<usize, GraphError> {
        self.resolve(id).map(|i| self.adjacency[i].len())
    }

    /// Distinct neighbor ids, ordered by internal index.
    pub fn neighbors(&self, id: &str) -> Result<Vec<&str>, GraphError> {
        let i = self.resolve(id)?;
        Ok(self.neighbor_indices(i).map(|j| self.nodes[j].id.as_str()).collect())
    }

    /// Number of neighbors of `id` having the given type.
    pub fn neighbors_by_type(&self, id: &str, node_type: &str) -> Result<usize, GraphError> {
        let i = self.resolve(id)?;
        Ok(self
            .neighbor_indices(i)
            .filter(|&j| self.nodes[j].node_type == node_type)
            .count())
    }

    pub(crate) fn resolve(&self, id: &str) -> Result<usize, GraphError> {
        self.id_index
            .get(id)
            .copied()
            .ok_or_else(|| GraphError::UnknownNode(id.to_string()))
    }

    pub(crate) fn node_at(&self, index: usize) -> &NodeRecord {
        &self.nodes[index]
    }

    fn node_by_id(&self, id: &str) -> &NodeRecord {
        &self.nodes[self.id_index[id]]
    }

    pub(crate) fn degree_at(&self, index: usize) -> usize {
        self.adjacency[index].len()
    }

    pub(crate) fn neighbor_indices(&self, index: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[index].iter().map(|a| a.node)
    }

    pub(crate) fn has_link_between(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search_by_key(&b, |adj| adj.node).is_ok()
    }

    /// Indices of the link records joining `a` and `b`, if any.
    pub(crate) fn links_between(&self, a: usize, b: usize) -> &[usize] {
        match self.adjacency[a].binary_search_by_key(&b, |adj| adj.node) {
            Ok(pos) => &self.adjacency[a][pos].links,
            Err(_) => &[],
        }
    }

    pub(crate) fn link_at(&self, index: usize) -> &LinkRecord {
        &self.links[index]
    }

    /// BFS levels from `start` over the undirected view, visiting only nodes
    /// accepted by `allowed` (the start itself is always visited).
    pub(crate) fn bfs_levels(
        &self,
        start: usize,
        allowed: impl Fn(usize) -> bool,
    ) -> Vec<Option<u32>> {
        let mut levels = vec![None; self.nodes.len()];
        levels[start] = Some(0);
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            let next = levels[u].unwrap() + 1;
            for v in self.neighbor_indices(u) {
                if levels[v].is_none() && allowed(v) {
                    levels[v] = Some(next);
                    queue.push_back(v);
                }
            }
        }
        levels
    }
}
