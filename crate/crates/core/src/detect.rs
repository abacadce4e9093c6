//! Relationship detection: the union of all shortest paths between two
//! nodes under traversal constraints, found by bidirectional breadth-first
//! search over the undirected view.

use std::collections::BTreeSet;

use crate::error::GraphError;
use crate::graph::{LinkRecord, NodeRecord, SemanticGraph};
use crate::ontology::OntologySchema;
use crate::relevance::{node_relevance, RelevanceMode};

/// Traversal restrictions. Node-type exclusions, the degree cap and the
/// prune set apply to interior nodes only; the queried endpoints always
/// survive their own types and degrees, though an endpoint listed in an
/// active prune set is a query error.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DetectConstraints {
    pub excluded_node_types: BTreeSet<String>,
    pub excluded_link_types: BTreeSet<String>,
    /// Interior nodes with more distinct neighbors than this are not
    /// traversed.
    pub max_degree: Option<usize>,
    /// Whether `pruned_nodes` is consulted.
    pub use_pruned: bool,
    pub pruned_nodes: BTreeSet<String>,
}

impl DetectConstraints {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        *self == Self::default()
    }
}

/// Which clustering value filters interior nodes in
/// [`detect_with_relevance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RelevanceFilter {
    #[default]
    Plain,
    Semantic,
}

/// Union-of-shortest-paths result. `distance` is `None` and the subgraph
/// empty when the endpoints are not connected under the constraints.
#[derive(Debug, Clone)]
pub struct DetectResult {
    pub source: String,
    pub target: String,
    pub distance: Option<usize>,
    pub subgraph: SemanticGraph,
    pub constraints: DetectConstraints,
}

struct Search<'a> {
    graph: &'a SemanticGraph,
    constraints: &'a DetectConstraints,
    source: usize,
    target: usize,
}

impl Search<'_> {
    fn interior_allowed(&self, v: usize) -> bool {
        if v == self.source || v == self.target {
            return true;
        }
        let node = self.graph.node_at(v);
        if self.constraints.excluded_node_types.contains(&node.node_type) {
            return false;
        }
        if let Some(cap) = self.constraints.max_degree {
            if self.graph.degree_at(v) > cap {
                return false;
            }
        }
        if self.constraints.use_pruned && self.constraints.pruned_nodes.contains(&node.id) {
            return false;
        }
        true
    }

    fn pair_connected(&self, u: usize, v: usize) -> bool {
        if self.constraints.excluded_link_types.is_empty() {
            return self.graph.has_link_between(u, v);
        }
        self.graph.links_between(u, v).iter().any(|&li| {
            !self
                .constraints
                .excluded_link_types
                .contains(&self.graph.link_at(li).link_type)
        })
    }

    fn link_allowed(&self, link: &LinkRecord) -> bool {
        !self.constraints.excluded_link_types.contains(&link.link_type)
    }

    /// Bidirectional level-by-level search for the constrained distance.
    fn distance(&self) -> Option<usize> {
        let n = self.graph.node_count();
        let mut dist_s: Vec<Option<u32>> = vec![None; n];
        let mut dist_t: Vec<Option<u32>> = vec![None; n];
        dist_s[self.source] = Some(0);
        dist_t[self.target] = Some(0);
        if self.source == self.target {
            return Some(0);
        }
        let mut frontier_s = vec![self.source];
        let mut frontier_t = vec![self.target];
        let mut level_s = 0u32;
        let mut level_t = 0u32;
        let mut best: Option<u32> = None;

        loop {
            if let Some(b) = best {
                if level_s + level_t >= b {
                    return Some(b as usize);
                }
            }
            if frontier_s.is_empty() || frontier_t.is_empty() {
                return best.map(|b| b as usize);
            }
            let expand_source = frontier_s.len() <= frontier_t.len();
            let (frontier, dist, other, level) = if expand_source {
                level_s += 1;
                (&mut frontier_s, &mut dist_s, &dist_t, level_s)
            } else {
                level_t += 1;
                (&mut frontier_t, &mut dist_t, &dist_s, level_t)
            };
            let mut next = Vec::new();
            for &u in frontier.iter() {
                for v in self.graph.neighbor_indices(u) {
                    if dist[v].is_some() || !self.interior_allowed(v) || !self.pair_connected(u, v)
                    {
                        continue;
                    }
                    dist[v] = Some(level);
                    if let Some(d_other) = other[v] {
                        let total = level + d_other;
                        if best.is_none_or(|b| total < b) {
                            best = Some(total);
                        }
                    }
                    next.push(v);
                }
            }
            *frontier = next;
        }
    }

    /// BFS levels from `start`, bounded by `limit`, honoring constraints.
    fn bounded_levels(&self, start: usize, limit: u32) -> Vec<Option<u32>> {
        let n = self.graph.node_count();
        let mut levels: Vec<Option<u32>> = vec![None; n];
        levels[start] = Some(0);
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let next = levels[u].unwrap() + 1;
            if next > limit {
                continue;
            }
            for v in self.graph.neighbor_indices(u) {
                if levels[v].is_none() && self.interior_allowed(v) && self.pair_connected(u, v) {
                    levels[v] = Some(next);
                    queue.push_back(v);
                }
            }
        }
        levels
    }
}

/// Extract the subgraph of all shortest paths between `a` and `b` under the
/// given constraints.
pub fn shortest_path_subgraph(
    graph: &SemanticGraph,
    a: &str,
    b: &str,
    constraints: &DetectConstraints,
) -> Result<DetectResult, GraphError> {
    if a == b {
        return Err(GraphError::IdenticalEndpoints(a.to_string()));
    }
    let source = graph.resolve(a)?;
    let target = graph.resolve(b)?;
    if constraints.use_pruned {
        for id in [a, b] {
            if constraints.pruned_nodes.contains(id) {
                return Err(GraphError::EndpointExcluded(id.to_string()));
            }
        }
    }

    let search = Search {
        graph,
        constraints,
        source,
        target,
    };
    let Some(distance) = search.distance() else {
        return Ok(DetectResult {
            source: a.to_string(),
            target: b.to_string(),
            distance: None,
            subgraph: SemanticGraph::assemble_untyped(vec![], vec![])?,
            constraints: constraints.clone(),
        });
    };
    let d = distance as u32;
    let from_source = search.bounded_levels(source, d);
    let from_target = search.bounded_levels(target, d);

    let on_path = |v: usize| -> bool {
        matches!(
            (from_source[v], from_target[v]),
            (Some(ds), Some(dt)) if ds + dt == d
        )
    };

    let nodes: Vec<NodeRecord> = (0..graph.node_count())
        .filter(|&v| on_path(v))
        .map(|v| graph.node_at(v).clone())
        .collect();
    let links: Vec<LinkRecord> = graph
        .links()
        .iter()
        .filter(|l| {
            let (Ok(u), Ok(v)) = (graph.resolve(&l.source), graph.resolve(&l.target)) else {
                return false;
            };
            if !on_path(u) || !on_path(v) || !search.link_allowed(l) {
                return false;
            }
            let (ds_u, dt_v) = (from_source[u].unwrap(), from_target[v].unwrap());
            let (ds_v, dt_u) = (from_source[v].unwrap(), from_target[u].unwrap());
            ds_u + 1 + dt_v == d || ds_v + 1 + dt_u == d
        })
        .cloned()
        .collect();

    Ok(DetectResult {
        source: a.to_string(),
        target: b.to_string(),
        distance: Some(distance),
        subgraph: SemanticGraph::assemble_untyped(nodes, links)?,
        constraints: constraints.clone(),
    })
}

/// Score every interior node's relevance and search with the non-useful
/// ones (clustering value at or below the threshold) pruned. The endpoints
/// are never filtered.
pub fn detect_with_relevance(
    graph: &SemanticGraph,
    schema: &OntologySchema,
    a: &str,
    b: &str,
    threshold: f64,
    filter: RelevanceFilter,
) -> Result<DetectResult, GraphError> {
    if a == b {
        return Err(GraphError::IdenticalEndpoints(a.to_string()));
    }
    graph.resolve(a)?;
    graph.resolve(b)?;
    let mode = match filter {
        RelevanceFilter::Plain => RelevanceMode::Plain,
        RelevanceFilter::Semantic => RelevanceMode::Semantic,
    };
    let mut pruned = BTreeSet::new();
    for node in graph.nodes() {
        if node.id == a || node.id == b {
            continue;
        }
        let relevance = node_relevance(graph, schema, &node.id, threshold, mode)?;
        if !relevance.useful {
            pruned.insert(node.id.clone());
        }
    }
    let constraints = DetectConstraints {
        use_pruned: true,
        pruned_nodes: pruned,
        ..DetectConstraints::default()
    };
    shortest_path_subgraph(graph, a, b, &constraints)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, LinkRecord, NodeRecord};
    use crate::testutil::{simple_graph, single_type_schema};

    fn ids(result: &DetectResult) -> Vec<&str> {
        result.subgraph.nodes().iter().map(|n| n.id.as_str()).collect()
    }

    #[test]
    fn unique_path_is_returned_whole() {
        let g = simple_graph(&["a", "b", "c", "d"], &[("a", "b"), ("b", "c"), ("c", "d")]);
        let r = shortest_path_subgraph(&g, "a", "d", &DetectConstraints::none()).unwrap();
        assert_eq!(r.distance, Some(3));
        assert_eq!(ids(&r), vec!["a", "b", "c", "d"]);
        assert_eq!(r.subgraph.link_count(), 3);
    }

    #[test]
    fn diamond_keeps_both_routes() {
        let g = simple_graph(
            &["a", "b", "c", "d"],
            &[("a", "b"), ("b", "d"), ("a", "c"), ("c", "d")],
        );
        let r = shortest_path_subgraph(&g, "a", "d", &DetectConstraints::none()).unwrap();
        assert_eq!(r.distance, Some(2));
        assert_eq!(ids(&r), vec!["a", "b", "c", "d"]);
        assert_eq!(r.subgraph.link_count(), 4);
    }

    #[test]
    fn longer_detour_is_not_in_the_subgraph() {
        let g = simple_graph(
            &["a", "b", "d", "x", "y"],
            &[("a", "b"), ("b", "d"), ("a", "x"), ("x", "y"), ("y", "d")],
        );
        let r = shortest_path_subgraph(&g, "a", "d", &DetectConstraints::none()).unwrap();
        assert_eq!(r.distance, Some(2));
        assert_eq!(ids(&r), vec!["a", "b", "d"]);
    }

    fn typed_diamond() -> SemanticGraph {
        let mut s = crate::ontology::OntologySchema::new();
        s.declare_node_type("end");
        s.declare_node_type("mid");
        s.declare_node_type("alt");
        s.declare_link_type("l");
        s.allow("end", "l", "mid").unwrap();
        s.allow("end", "l", "alt").unwrap();
        build_graph(
            vec![
                NodeRecord::new("a", "end"),
                NodeRecord::new("b", "mid"),
                NodeRecord::new("c", "alt"),
                NodeRecord::new("d", "end"),
            ],
            vec![
                LinkRecord::new("a", "b", "l"),
                LinkRecord::new("b", "d", "l"),
                LinkRecord::new("a", "c", "l"),
                LinkRecord::new("c", "d", "l"),
            ],
            &s,
        )
        .unwrap()
    }

    #[test]
    fn excluded_type_drops_one_route() {
        let g = typed_diamond();
        let constraints = DetectConstraints {
            excluded_node_types: ["mid".to_string()].into(),
            ..DetectConstraints::default()
        };
        let r = shortest_path_subgraph(&g, "a", "d", &constraints).unwrap();
        assert_eq!(r.distance, Some(2));
        assert_eq!(ids(&r), vec!["a", "c", "d"]);
        assert_eq!(r.subgraph.link_count(), 2);
    }

    #[test]
    fn endpoint_type_is_never_excluded() {
        let g = typed_diamond();
        let constraints = DetectConstraints {
            excluded_node_types: ["end".to_string(), "mid".to_string()].into(),
            ..DetectConstraints::default()
        };
        let r = shortest_path_subgraph(&g, "a", "d", &constraints).unwrap();
        assert_eq!(r.distance, Some(2));
        assert_eq!(ids(&r), vec!["a", "c", "d"]);
    }

    #[test]
    fn excluded_link_type_reroutes() {
        let schema = single_type_schema();
        let g = build_graph(
            vec![
                NodeRecord::new("a", "node"),
                NodeRecord::new("b", "node"),
                NodeRecord::new("c", "node"),
            ],
            vec![
                LinkRecord::new("a", "b", "fast"),
                LinkRecord::new("a", "c", "slow"),
                LinkRecord::new("c", "b", "slow"),
            ],
            &schema,
        )
        .unwrap();
        let constraints = DetectConstraints {
            excluded_link_types: ["fast".to_string()].into(),
            ..DetectConstraints::default()
        };
        let r = shortest_path_subgraph(&g, "a", "b", &constraints).unwrap();
        assert_eq!(r.distance, Some(2));
        assert_eq!(ids(&r), vec!["a", "b", "c"]);
        // a parallel link of an allowed type keeps the pair adjacent
        let g2 = build_graph(
            vec![NodeRecord::new("a", "node"), NodeRecord::new("b", "node")],
            vec![
                LinkRecord::new("a", "b", "fast"),
                LinkRecord::new("a", "b", "slow"),
            ],
            &schema,
        )
        .unwrap();
        let r = shortest_path_subgraph(&g2, "a", "b", &constraints).unwrap();
        assert_eq!(r.distance, Some(1));
        assert_eq!(r.subgraph.link_count(), 1); // only the allowed record
    }

    #[test]
    fn max_degree_skips_interior_hubs_only() {
        // a - hub - b and a - x - y - b; hub has degree 4
        let g = simple_graph(
            &["a", "b", "hub", "x", "y", "z", "w"],
            &[
                ("a", "hub"), ("hub", "b"), ("hub", "z"), ("hub", "w"),
                ("a", "x"), ("x", "y"), ("y", "b"),
            ],
        );
        let constraints = DetectConstraints {
            max_degree: Some(3),
            ..DetectConstraints::default()
        };
        let r = shortest_path_subgraph(&g, "a", "b", &constraints).unwrap();
        assert_eq!(r.distance, Some(3));
        assert_eq!(ids(&r), vec!["a", "b", "x", "y"]);
        // endpoints keep their own degrees: querying the hub itself works
        let r = shortest_path_subgraph(&g, "hub", "a", &constraints).unwrap();
        assert_eq!(r.distance, Some(1));
    }

    #[test]
    fn unreachable_gives_marker_and_empty_subgraph() {
        let g = simple_graph(&["a", "b"], &[]);
        let r = shortest_path_subgraph(&g, "a", "b", &DetectConstraints::none()).unwrap();
        assert_eq!(r.distance, None);
        assert_eq!(r.subgraph.node_count(), 0);
        assert_eq!(r.subgraph.link_count(), 0);
    }

    #[test]
    fn bad_queries_error() {
        let g = simple_graph(&["a", "b"], &[("a", "b")]);
        assert!(matches!(
            shortest_path_subgraph(&g, "a", "a", &DetectConstraints::none()),
            Err(GraphError::IdenticalEndpoints(_))
        ));
        assert!(matches!(
            shortest_path_subgraph(&g, "a", "zz", &DetectConstraints::none()),
            Err(GraphError::UnknownNode(_))
        ));
        let constraints = DetectConstraints {
            use_pruned: true,
            pruned_nodes: ["a".to_string()].into(),
            ..DetectConstraints::default()
        };
        assert!(matches!(
            shortest_path_subgraph(&g, "a", "b", &constraints),
            Err(GraphError::EndpointExcluded(_))
        ));
    }

    #[test]
    fn relevance_filter_cuts_zero_transitivity_hubs() {
        // p and q connect only through a hub whose neighbors are unlinked
        let g = simple_graph(
            &["p", "q", "sf", "r"],
            &[("p", "sf"), ("q", "sf"), ("r", "sf")],
        );
        let r = detect_with_relevance(
            &g,
            &single_type_schema(),
            "p",
            "q",
            0.1,
            RelevanceFilter::Plain,
        )
        .unwrap();
        assert_eq!(r.distance, None);
        assert_eq!(r.subgraph.node_count(), 0);
    }

    #[test]
    fn relevance_filter_keeps_clustered_connectors() {
        // p - x - q with x's neighborhood closed through u
        let g = simple_graph(
            &["p", "q", "x", "u"],
            &[("p", "x"), ("q", "x"), ("p", "u"), ("q", "u"), ("x", "u")],
        );
        let r = detect_with_relevance(
            &g,
            &single_type_schema(),
            "p",
            "q",
            0.1,
            RelevanceFilter::Plain,
        )
        .unwrap();
        assert_eq!(r.distance, Some(2));
        assert_eq!(ids(&r), vec!["p", "q", "x", "u"]);
    }

    #[test]
    fn zero_threshold_without_zero_clustering_matches_unconstrained() {
        // every interior node has positive clustering
        let g = simple_graph(
            &["p", "q", "x", "u"],
            &[("p", "x"), ("q", "x"), ("p", "u"), ("q", "u"), ("x", "u")],
        );
        let filtered = detect_with_relevance(
            &g,
            &single_type_schema(),
            "p",
            "q",
            0.0,
            RelevanceFilter::Plain,
        )
        .unwrap();
        let plain = shortest_path_subgraph(&g, "p", "q", &DetectConstraints::none()).unwrap();
        assert_eq!(filtered.distance, plain.distance);
        assert_eq!(ids(&filtered), ids(&plain));
    }
}
