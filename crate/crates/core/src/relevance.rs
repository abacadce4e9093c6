//! Transitivity-based relevance of nodes and links, outlier and latent-link
//! scans, and pruning of non-useful nodes into neighbor attributes.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::error::GraphError;
use crate::graph::{LinkRecord, NodeRecord, SemanticGraph};
use crate::ontology::OntologySchema;
use crate::stats::{clustering_coefficient, semantic_clustering};

/// Which clustering value decides whether a node is useful.
///
/// `WeakTwoHop` additionally counts a neighbor pair as related when the two
/// neighbors share a third node, other than the center, that the caller has
/// already marked useful. The pass is non-iterative: the useful set is taken
/// as given.
#[derive(Debug, Clone, Copy)]
pub enum RelevanceMode<'a> {
    Plain,
    Semantic,
    WeakTwoHop { useful: &'a HashSet<String> },
}

impl RelevanceMode<'_> {
    pub fn label(&self) -> &'static str {
        match self {
            RelevanceMode::Plain => "plain",
            RelevanceMode::Semantic => "semantic",
            RelevanceMode::WeakTwoHop { .. } => "weak-2hop",
        }
    }
}

/// Relevance verdict for one node.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeRelevance {
    pub node: String,
    pub mode: &'static str,
    pub value: f64,
    pub threshold: f64,
    /// True exactly when `value > threshold`.
    pub useful: bool,
}

/// Counts of linked neighbor pairs of a center node, keyed by the unordered
/// pair of link types attaching the two neighbors to the center.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairTypeMatrix {
    pub center: String,
    counts: BTreeMap<(String, String), usize>,
}

impl PairTypeMatrix {
    /// Symmetric lookup; absent pairs count zero.
    pub fn get(&self, type_a: &str, type_b: &str) -> usize {
        let key = ordered_pair(type_a, type_b);
        self.counts.get(&key).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str, usize)> {
        self.counts
            .iter()
            .map(|((a, b), &c)| (a.as_str(), b.as_str(), c))
    }

    /// Sum over unordered type pairs. Equals the count of linked neighbor
    /// pairs when every neighbor attaches via a single link type.
    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }
}

fn ordered_pair(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

/// Common-neighbor relevance of a node pair.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkRelevance {
    pub a: String,
    pub b: String,
    /// Nodes linked to both endpoints, the endpoints themselves excluded.
    pub common: usize,
    /// Nodes linked to either endpoint, the endpoints themselves excluded.
    pub total: usize,
    /// `common / total`, or 0 when no third node neighbors either endpoint.
    pub score: f64,
}

/// Mean and spread of the pairwise relevance over existing links of a type.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkTypeRelevance {
    pub link_type: String,
    /// Distinct (endpoint pair, type) links of the type.
    pub link_count: usize,
    pub mean: f64,
    pub stddev: f64,
}

/// A link whose relevance sits far from its type's mean.
#[derive(Debug, Clone, PartialEq)]
pub struct RelevanceOutlier {
    pub a: String,
    pub b: String,
    pub link_type: String,
    pub score: f64,
    pub type_mean: f64,
    pub type_stddev: f64,
}

/// Score a node's usefulness for relationship detection by how often its
/// neighbors are related to each other.
pub fn node_relevance(
    graph: &SemanticGraph,
    schema: &OntologySchema,
    id: &str,
    threshold: f64,
    mode: RelevanceMode<'_>,
) -> Result<NodeRelevance, GraphError> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(GraphError::InvalidThreshold(threshold));
    }
    let value = match mode {
        RelevanceMode::Plain => clustering_coefficient(graph, id)?,
        RelevanceMode::Semantic => semantic_clustering(graph, schema, id)?,
        RelevanceMode::WeakTwoHop { useful } => weak_two_hop_value(graph, id, useful)?,
    };
    Ok(NodeRelevance {
        node: id.to_string(),
        mode: mode.label(),
        value,
        threshold,
        useful: value > threshold,
    })
}

fn weak_two_hop_value(
    graph: &SemanticGraph,
    id: &str,
    useful: &HashSet<String>,
) -> Result<f64, GraphError> {
    let i = graph.resolve(id)?;
    let k = graph.degree_at(i);
    if k <= 1 {
        return Ok(0.0);
    }
    let neighbors: Vec<usize> = graph.neighbor_indices(i).collect();
    let mut related = 0usize;
    for (x, &u) in neighbors.iter().enumerate() {
        for &v in &neighbors[x + 1..] {
            if graph.has_link_between(u, v) || share_useful_neighbor(graph, u, v, i, useful) {
                related += 1;
            }
        }
    }
    Ok(related as f64 / (k * (k - 1) / 2) as f64)
}

fn share_useful_neighbor(
    graph: &SemanticGraph,
    u: usize,
    v: usize,
    center: usize,
    useful: &HashSet<String>,
) -> bool {
    graph.neighbor_indices(u).any(|w| {
        w != center
            && w != v
            && graph.has_link_between(w, v)
            && useful.contains(&graph.node_at(w).id)
    })
}

/// Count linked neighbor pairs of `id` per unordered pair of attaching link
/// types. A neighbor pair attached via several types contributes once to
/// each matching type pair.
pub fn pair_type_matrix(graph: &SemanticGraph, id: &str) -> Result<PairTypeMatrix, GraphError> {
    let i = graph.resolve(id)?;
    let neighbors: Vec<usize> = graph.neighbor_indices(i).collect();
    let attach_types: Vec<BTreeSet<&str>> = neighbors
        .iter()
        .map(|&u| {
            graph
                .links_between(i, u)
                .iter()
                .map(|&li| graph.link_at(li).link_type.as_str())
                .collect()
        })
        .collect();
    let mut counts: BTreeMap<(String, String), usize> = BTreeMap::new();
    for (x, &u) in neighbors.iter().enumerate() {
        for (offset, &v) in neighbors[x + 1..].iter().enumerate() {
            if !graph.has_link_between(u, v) {
                continue;
            }
            let y = x + 1 + offset;
            let mut pairs: BTreeSet<(String, String)> = BTreeSet::new();
            for t1 in &attach_types[x] {
                for t2 in &attach_types[y] {
                    pairs.insert(ordered_pair(t1, t2));
                }
            }
            for key in pairs {
                *counts.entry(key).or_insert(0) += 1;
            }
        }
    }
    Ok(PairTypeMatrix {
        center: id.to_string(),
        counts,
    })
}

/// Relevance of the (possibly absent) relationship between two nodes: the
/// fraction of third-party neighbors they share.
///
/// `total` is the size of the union of the two neighborhoods with both
/// endpoints excluded. When the endpoints are adjacent this is smaller by 2
/// than `deg(a) + deg(b) - common`, since each endpoint sits in the other's
/// neighbor list but never counts as a third party.
pub fn link_relevance(
    graph: &SemanticGraph,
    a: &str,
    b: &str,
) -> Result<LinkRelevance, GraphError> {
    if a == b {
        return Err(GraphError::IdenticalEndpoints(a.to_string()));
    }
    let ia = graph.resolve(a)?;
    let ib = graph.resolve(b)?;
    Ok(link_relevance_at(graph, ia, ib))
}

fn link_relevance_at(graph: &SemanticGraph, ia: usize, ib: usize) -> LinkRelevance {
    let mut union: BTreeSet<usize> = BTreeSet::new();
    let mut common = 0usize;
    for u in graph.neighbor_indices(ia) {
        if u == ib {
            continue;
        }
        union.insert(u);
        if graph.has_link_between(u, ib) {
            common += 1;
        }
    }
    for u in graph.neighbor_indices(ib) {
        if u != ia {
            union.insert(u);
        }
    }
    let total = union.len();
    LinkRelevance {
        a: graph.node_at(ia).id.clone(),
        b: graph.node_at(ib).id.clone(),
        common,
        total,
        score: if total == 0 {
            0.0
        } else {
            common as f64 / total as f64
        },
    }
}

/// Distinct (unordered pair, link type) combinations present in the graph,
/// in deterministic order.
fn distinct_typed_links(graph: &SemanticGraph) -> Vec<(String, String, String)> {
    let mut set: BTreeSet<(String, String, String)> = BTreeSet::new();
    for link in graph.links() {
        let (a, b) = if link.source <= link.target {
            (link.source.clone(), link.target.clone())
        } else {
            (link.target.clone(), link.source.clone())
        };
        set.insert((link.link_type.clone(), a, b));
    }
    set.into_iter().collect()
}

/// Mean pairwise relevance over the existing links of each type. A low mean
/// marks the type as weak evidence of a relationship.
pub fn link_type_relevance(graph: &SemanticGraph) -> Vec<LinkTypeRelevance> {
    let mut per_type: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for (link_type, a, b) in distinct_typed_links(graph) {
        let score = link_relevance(graph, &a, &b)
            .expect("stored link endpoints exist")
            .score;
        per_type.entry(link_type).or_default().push(score);
    }
    per_type
        .into_iter()
        .map(|(link_type, scores)| {
            let n = scores.len() as f64;
            let mean = scores.iter().sum::<f64>() / n;
            let second = scores.iter().map(|s| s * s).sum::<f64>() / n;
            LinkTypeRelevance {
                link_type,
                link_count: scores.len(),
                mean,
                stddev: (second - mean * mean).max(0.0).sqrt(),
            }
        })
        .collect()
}

/// Minimum links of a type before its outlier statistics mean anything.
const OUTLIER_MIN_LINKS: usize = 5;

/// Links whose relevance deviates from their type's mean by more than
/// `deviation_factor` population standard deviations, in either direction.
/// Types with fewer than five links are skipped.
pub fn relevance_outliers(
    graph: &SemanticGraph,
    deviation_factor: f64,
) -> Result<Vec<RelevanceOutlier>, GraphError> {
    if deviation_factor <= 0.0 {
        return Err(GraphError::InvalidDeviationFactor(deviation_factor));
    }
    let mut per_type: BTreeMap<String, Vec<(String, String, f64)>> = BTreeMap::new();
    for (link_type, a, b) in distinct_typed_links(graph) {
        let score = link_relevance(graph, &a, &b)
            .expect("stored link endpoints exist")
            .score;
        per_type.entry(link_type).or_default().push((a, b, score));
    }
    let mut out = Vec::new();
    for (link_type, scored) in per_type {
        if scored.len() < OUTLIER_MIN_LINKS {
            continue;
        }
        let n = scored.len() as f64;
        let mean = scored.iter().map(|(_, _, s)| s).sum::<f64>() / n;
        let second = scored.iter().map(|(_, _, s)| s * s).sum::<f64>() / n;
        let stddev = (second - mean * mean).max(0.0).sqrt();
        for (a, b, score) in scored {
            if (score - mean).abs() > deviation_factor * stddev {
                out.push(RelevanceOutlier {
                    a,
                    b,
                    link_type: link_type.clone(),
                    score,
                    type_mean: mean,
                    type_stddev: stddev,
                });
            }
        }
    }
    Ok(out)
}

/// Non-adjacent node pairs scoring at least `min_score`, restricted to type
/// pairs the schema allows to be linked, sorted by score descending.
pub fn latent_links(
    graph: &SemanticGraph,
    min_score: f64,
    schema: &OntologySchema,
) -> Result<Vec<LinkRelevance>, GraphError> {
    if !(min_score > 0.0 && min_score <= 1.0) {
        return Err(GraphError::InvalidThreshold(min_score));
    }
    // only pairs with a common neighbor can score above zero
    let mut candidates: BTreeSet<(usize, usize)> = BTreeSet::new();
    for w in 0..graph.node_count() {
        let neighbors: Vec<usize> = graph.neighbor_indices(w).collect();
        for (x, &u) in neighbors.iter().enumerate() {
            for &v in &neighbors[x + 1..] {
                candidates.insert((u.min(v), u.max(v)));
            }
        }
    }
    let mut out = Vec::new();
    for (u, v) in candidates {
        if graph.has_link_between(u, v) {
            continue;
        }
        if !schema.allows_pair(&graph.node_at(u).node_type, &graph.node_at(v).node_type) {
            continue;
        }
        let relevance = link_relevance_at(graph, u, v);
        if relevance.score >= min_score {
            out.push(relevance);
        }
    }
    out.sort_by(|x, y| {
        y.score
            .partial_cmp(&x.score)
            .unwrap()
            .then_with(|| x.a.cmp(&y.a))
            .then_with(|| x.b.cmp(&y.b))
    });
    Ok(out)
}

/// Remove a node and its links, recording the removed node's id as an
/// attribute on each former neighbor so no information is lost. Existing
/// values under the same attribute are extended with a `|` separator.
pub fn prune_node(
    graph: &SemanticGraph,
    id: &str,
    attribute_name: &str,
) -> Result<SemanticGraph, GraphError> {
    let i = graph.resolve(id)?;
    let neighbor_ids: BTreeSet<&str> = graph
        .neighbor_indices(i)
        .map(|j| graph.node_at(j).id.as_str())
        .collect();
    let nodes: Vec<NodeRecord> = graph
        .nodes()
        .iter()
        .filter(|n| n.id != id)
        .map(|n| {
            let mut node = n.clone();
            if neighbor_ids.contains(n.id.as_str()) {
                node.attributes
                    .entry(attribute_name.to_string())
                    .and_modify(|v| {
                        v.push('|');
                        v.push_str(id);
                    })
                    .or_insert_with(|| id.to_string());
            }
            node
        })
        .collect();
    let links: Vec<LinkRecord> = graph
        .links()
        .iter()
        .filter(|l| l.source != id && l.target != id)
        .cloned()
        .collect();
    SemanticGraph::assemble_untyped(nodes, links)
}
