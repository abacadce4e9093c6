//! Graph-statistical measures: clustering (plain and schema-aware),
//! per-type connectivity and disparity, degree distributions, path-length
//! matrices, and type-removal impact.
//!
//! Conventions, applied uniformly:
//!
//! * all measures run on the undirected view of the graph;
//! * per-node clustering is 0 for degree 0 or 1 and the graph average
//!   includes those zeros;
//! * disparity is undefined at degree 0, and per-type disparity averages
//!   run over nodes with at least one neighbor;
//! * dispersions are population second moments, not sample variances;
//! * quantities whose denominator is missing (no allowed neighbor types,
//!   zero random baseline, no contributing nodes) are reported as `None`,
//!   never as silent zeros.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::GraphError;
use crate::graph::SemanticGraph;
use crate::ontology::OntologySchema;

/// How the random disparity baseline normalizes type populations.
///
/// `Literal` divides each neighbor-type population by the whole node count;
/// `Normalized` divides by the total population of eligible neighbor types
/// only, so the baseline weights sum to one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum YrMode {
    #[default]
    Literal,
    Normalized,
}

impl fmt::Display for YrMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            YrMode::Literal => write!(f, "literal"),
            YrMode::Normalized => write!(f, "normalized"),
        }
    }
}

/// Per-type connectivity row.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeStats {
    pub node_type: String,
    /// Number of nodes of this type.
    pub n: usize,
    /// How many node types the schema allows as neighbors.
    pub allowed_types: usize,
    /// Mean degree over all nodes of the type; `None` when the type is empty.
    pub mean_degree: Option<f64>,
    /// Mean squared degree over all nodes of the type.
    pub mean_square_degree: Option<f64>,
    /// Mean neighbors per allowed neighbor type; `None` when the schema
    /// allows none or the type is empty.
    pub neighbors_per_type: Option<f64>,
    /// Degree dispersion rescaled by the allowed-neighbor-type count.
    pub degree_dispersion: Option<f64>,
}

/// Per-type disparity row.
#[derive(Debug, Clone, PartialEq)]
pub struct DisparityStats {
    pub node_type: String,
    pub n: usize,
    /// Nodes of the type with degree >= 1; only these enter the averages.
    pub contributing: usize,
    /// Mean disparity over contributing nodes.
    pub mean: Option<f64>,
    /// Population dispersion of disparity over contributing nodes.
    pub dispersion: Option<f64>,
    /// Disparity of a node whose neighbors are picked at random from the
    /// populations of the allowed neighbor types.
    pub random_baseline: f64,
    /// Mean disparity rescaled by the random baseline; `None` when either
    /// part is undefined.
    pub ratio: Option<f64>,
    pub ratio_dispersion: Option<f64>,
}

/// Combined per-type statistics report.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeStatsReport {
    pub yr_mode: YrMode,
    pub total_nodes: usize,
    pub total_links: usize,
    pub degree: Vec<DegreeStats>,
    pub disparity: Vec<DisparityStats>,
}

/// Exact degree histogram for one node type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeDistribution {
    pub node_type: String,
    pub frequencies: BTreeMap<usize, usize>,
}

impl DegreeDistribution {
    /// Total frequency; equals the number of nodes of the type.
    pub fn total(&self) -> usize {
        self.frequencies.values().sum()
    }

    pub fn mean(&self) -> Option<f64> {
        let total = self.total();
        if total == 0 {
            return None;
        }
        let sum: usize = self.frequencies.iter().map(|(k, c)| k * c).sum();
        Some(sum as f64 / total as f64)
    }
}

/// One cell of the path-length matrix: mean shortest-path length over
/// reachable ordered pairs, with unreachable pairs counted separately.
#[derive(Debug, Clone, PartialEq)]
pub struct PathCell {
    pub mean: Option<f64>,
    pub reachable: usize,
    pub unreachable: usize,
}

/// Mean shortest-path lengths for every ordered pair of node types present
/// in the graph.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PathMatrix {
    pub cells: BTreeMap<(String, String), PathCell>,
}

impl PathMatrix {
    pub fn get(&self, source_type: &str, target_type: &str) -> Option<&PathCell> {
        self.cells
            .get(&(source_type.to_string(), target_type.to_string()))
    }

    pub fn types(&self) -> Vec<&str> {
        let mut out: Vec<&str> = self.cells.keys().map(|(a, _)| a.as_str()).collect();
        out.dedup();
        out
    }
}

/// Effect of deleting every node of one type on distances among the rest.
#[derive(Debug, Clone, PartialEq)]
pub struct RemovalImpact {
    pub node_type: String,
    pub remaining_nodes: usize,
    /// Mean original distance over surviving-node pairs reachable in the
    /// original graph.
    pub baseline_mean: Option<f64>,
    pub baseline_reachable: usize,
    /// Mean distance after removal over pairs still reachable.
    pub removed_mean: Option<f64>,
    pub removed_reachable: usize,
    /// Ordered pairs reachable before the removal but not after.
    pub newly_unreachable: usize,
    /// `removed_mean - baseline_mean` when both are defined. Large values
    /// flag the type as a path-shortening hub.
    pub mean_increase: Option<f64>,
}

impl RemovalImpact {
    pub fn disconnects(&self) -> bool {
        self.newly_unreachable > 0
    }
}

/// Number of links among the distinct neighbors of `index`, counting each
/// linked neighbor pair once.
pub(crate) fn linked_neighbor_pairs(graph: &SemanticGraph, index: usize) -> usize {
    let neighbors: Vec<usize> = graph.neighbor_indices(index).collect();
    let mut count = 0;
    for (a, &u) in neighbors.iter().enumerate() {
        for &v in &neighbors[a + 1..] {
            if graph.has_link_between(u, v) {
                count += 1;
            }
        }
    }
    count
}

fn clustering_at(graph: &SemanticGraph, index: usize) -> f64 {
    let k = graph.degree_at(index);
    if k <= 1 {
        return 0.0;
    }
    let pairs = k * (k - 1) / 2;
    linked_neighbor_pairs(graph, index) as f64 / pairs as f64
}

/// Fraction of a node's neighbor pairs that are themselves linked;
/// 0 for degree 0 or 1.
pub fn clustering_coefficient(graph: &SemanticGraph, id: &str) -> Result<f64, GraphError> {
    let i = graph.resolve(id)?;
    Ok(clustering_at(graph, i))
}

/// Arithmetic mean of the per-node clustering coefficient over all nodes,
/// zeros included.
pub fn graph_clustering(graph: &SemanticGraph) -> Result<f64, GraphError> {
    if graph.node_count() == 0 {
        return Err(GraphError::EmptyGraph);
    }
    let sum: f64 = (0..graph.node_count())
        .map(|i| clustering_at(graph, i))
        .sum();
    Ok(sum / graph.node_count() as f64)
}

/// Ratio of closed to total neighbor pairs summed over all nodes
/// (three times the triangle count over the number of two-paths).
///
/// This is the other standard aggregate clustering statistic; it weights
/// high-degree nodes by their pair count instead of averaging per-node
/// ratios, and it is the quantity the closed-form null-model baselines
/// (`predicted_projection_clustering`, the 1/n decay of uniform random
/// graphs) actually describe.
pub fn graph_transitivity(graph: &SemanticGraph) -> Result<f64, GraphError> {
    if graph.node_count() == 0 {
        return Err(GraphError::EmptyGraph);
    }
    let mut closed = 0usize;
    let mut pairs = 0usize;
    for i in 0..graph.node_count() {
        let k = graph.degree_at(i);
        if k >= 2 {
            closed += linked_neighbor_pairs(graph, i);
            pairs += k * (k - 1) / 2;
        }
    }
    if pairs == 0 {
        return Ok(0.0);
    }
    Ok(closed as f64 / pairs as f64)
}

/// Number of neighbor pairs of `index` whose types the schema allows to be
/// linked by some triple.
fn allowed_neighbor_pairs(graph: &SemanticGraph, schema: &OntologySchema, index: usize) -> usize {
    let neighbors: Vec<usize> = graph.neighbor_indices(index).collect();
    let mut count = 0;
    for (a, &u) in neighbors.iter().enumerate() {
        let tu = &graph.node_at(u).node_type;
        for &v in &neighbors[a + 1..] {
            if schema.allows_pair(tu, &graph.node_at(v).node_type) {
                count += 1;
            }
        }
    }
    count
}

/// Clustering with the denominator restricted to neighbor pairs the schema
/// allows to be linked; 0 when no neighbor pair may be linked.
pub fn semantic_clustering(
    graph: &SemanticGraph,
    schema: &OntologySchema,
    id: &str,
) -> Result<f64, GraphError> {
    let i = graph.resolve(id)?;
    let allowed = allowed_neighbor_pairs(graph, schema, i);
    if allowed == 0 {
        return Ok(0.0);
    }
    Ok(linked_neighbor_pairs(graph, i) as f64 / allowed as f64)
}

/// Row types: every type declared by the schema plus any type present in
/// the graph, sorted.
fn row_types(graph: &SemanticGraph, schema: &OntologySchema) -> Vec<String> {
    let mut types: Vec<String> = schema.node_types().map(str::to_string).collect();
    for t in graph.type_counts().keys() {
        if !schema.has_node_type(t) {
            types.push(t.clone());
        }
    }
    types.sort();
    types.dedup();
    types
}

/// Per-type connectivity statistics: mean degree, mean neighbors per
/// allowed type, and the rescaled degree dispersion.
pub fn type_degree_stats(graph: &SemanticGraph, schema: &OntologySchema) -> Vec<DegreeStats> {
    let mut sums: BTreeMap<&str, (usize, f64, f64)> = BTreeMap::new();
    for i in 0..graph.node_count() {
        let k = graph.degree_at(i) as f64;
        let entry = sums
            .entry(graph.node_at(i).node_type.as_str())
            .or_insert((0, 0.0, 0.0));
        entry.0 += 1;
        entry.1 += k;
        entry.2 += k * k;
    }
    row_types(graph, schema)
        .into_iter()
        .map(|t| {
            let allowed_types = schema.allowed_neighbor_type_count(&t).unwrap_or(0);
            let (n, sum, sum_sq) = sums.get(t.as_str()).copied().unwrap_or((0, 0.0, 0.0));
            let mean_degree = (n > 0).then(|| sum / n as f64);
            let mean_square_degree = (n > 0).then(|| sum_sq / n as f64);
            let (neighbors_per_type, degree_dispersion) = match (mean_degree, allowed_types) {
                (Some(mean), k0) if k0 > 0 => {
                    let variance = (mean_square_degree.unwrap() - mean * mean).max(0.0);
                    (Some(mean / k0 as f64), Some(variance.sqrt() / k0 as f64))
                }
                _ => (None, None),
            };
            DegreeStats {
                node_type: t,
                n,
                allowed_types,
                mean_degree,
                mean_square_degree,
                neighbors_per_type,
                degree_dispersion,
            }
        })
        .collect()
}

fn disparity_at(graph: &SemanticGraph, index: usize) -> Option<f64> {
    let degree = graph.degree_at(index);
    if degree == 0 {
        return None;
    }
    let mut per_type: BTreeMap<&str, usize> = BTreeMap::new();
    for j in graph.neighbor_indices(index) {
        *per_type.entry(graph.node_at(j).node_type.as_str()).or_insert(0) += 1;
    }
    let k = degree as f64;
    Some(per_type.values().map(|&c| (c as f64 / k).powi(2)).sum())
}

/// Sum of squared per-type neighbor fractions: 1 when all neighbors share a
/// type, near 1/m for an even spread over m types. Undefined at degree 0.
pub fn disparity(graph: &SemanticGraph, id: &str) -> Result<f64, GraphError> {
    let i = graph.resolve(id)?;
    disparity_at(graph, i).ok_or_else(|| GraphError::DisparityUndefined(id.to_string()))
}

/// The random disparity baseline for one type under the given mode.
fn random_baseline(
    graph: &SemanticGraph,
    schema: &OntologySchema,
    node_type: &str,
    mode: YrMode,
) -> f64 {
    let eligible = match schema.allowed_neighbor_types(node_type) {
        Ok(set) => set,
        Err(_) => return 0.0,
    };
    let denominator = match mode {
        YrMode::Literal => graph.node_count(),
        YrMode::Normalized => eligible.iter().map(|t| graph.count_of_type(t)).sum(),
    };
    if denominator == 0 {
        return 0.0;
    }
    eligible
        .iter()
        .map(|t| (graph.count_of_type(t) as f64 / denominator as f64).powi(2))
        .sum()
}

/// Per-type disparity statistics with the random baseline and rescaled
/// ratio.
pub fn type_disparity(
    graph: &SemanticGraph,
    schema: &OntologySchema,
    mode: YrMode,
) -> Vec<DisparityStats> {
    let mut sums: BTreeMap<&str, (usize, f64, f64)> = BTreeMap::new();
    for i in 0..graph.node_count() {
        if let Some(y) = disparity_at(graph, i) {
            let entry = sums
                .entry(graph.node_at(i).node_type.as_str())
                .or_insert((0, 0.0, 0.0));
            entry.0 += 1;
            entry.1 += y;
            entry.2 += y * y;
        }
    }
    row_types(graph, schema)
        .into_iter()
        .map(|t| {
            let n = graph.count_of_type(&t);
            let (contributing, sum, sum_sq) = sums.get(t.as_str()).copied().unwrap_or((0, 0.0, 0.0));
            let mean = (contributing > 0).then(|| sum / contributing as f64);
            let dispersion = mean.map(|m| {
                let second = sum_sq / contributing as f64;
                (second - m * m).max(0.0).sqrt()
            });
            let baseline = random_baseline(graph, schema, &t, mode);
            let (ratio, ratio_dispersion) = if baseline > 0.0 {
                (
                    mean.map(|m| m / baseline),
                    dispersion.map(|d| d / baseline),
                )
            } else {
                (None, None)
            };
            DisparityStats {
                node_type: t,
                n,
                contributing,
                mean,
                dispersion,
                random_baseline: baseline,
                ratio,
                ratio_dispersion,
            }
        })
        .collect()
}

/// Full per-type report: connectivity plus disparity.
pub fn type_stats_report(
    graph: &SemanticGraph,
    schema: &OntologySchema,
    mode: YrMode,
) -> TypeStatsReport {
    TypeStatsReport {
        yr_mode: mode,
        total_nodes: graph.node_count(),
        total_links: graph.link_count(),
        degree: type_degree_stats(graph, schema),
        disparity: type_disparity(graph, schema, mode),
    }
}

/// Exact histogram of degrees over nodes of one type.
pub fn degree_distribution(graph: &SemanticGraph, node_type: &str) -> DegreeDistribution {
    let mut frequencies = BTreeMap::new();
    for i in 0..graph.node_count() {
        if graph.node_at(i).node_type == node_type {
            *frequencies.entry(graph.degree_at(i)).or_insert(0) += 1;
        }
    }
    DegreeDistribution {
        node_type: node_type.to_string(),
        frequencies,
    }
}

/// Mean shortest-path length for every ordered pair of node types present
/// in the graph. Unreachable ordered pairs are counted, never averaged.
pub fn path_length_matrix(graph: &SemanticGraph) -> PathMatrix {
    let mut sums: BTreeMap<(String, String), (u64, usize)> = BTreeMap::new();
    for i in 0..graph.node_count() {
        let source_type = graph.node_at(i).node_type.clone();
        let levels = graph.bfs_levels(i, |_| true);
        for (j, level) in levels.iter().enumerate() {
            if i == j {
                continue;
            }
            if let Some(d) = level {
                let key = (source_type.clone(), graph.node_at(j).node_type.clone());
                let entry = sums.entry(key).or_insert((0, 0));
                entry.0 += u64::from(*d);
                entry.1 += 1;
            }
        }
    }

    let mut cells = BTreeMap::new();
    let counts = graph.type_counts();
    for (ta, &na) in counts {
        if na == 0 {
            continue;
        }
        for (tb, &nb) in counts {
            if nb == 0 {
                continue;
            }
            let ordered_pairs = if ta == tb { na * (na - 1) } else { na * nb };
            let (sum, reachable) = sums
                .get(&(ta.clone(), tb.clone()))
                .copied()
                .unwrap_or((0, 0));
            cells.insert(
                (ta.clone(), tb.clone()),
                PathCell {
                    mean: (reachable > 0).then(|| sum as f64 / reachable as f64),
                    reachable,
                    unreachable: ordered_pairs - reachable,
                },
            );
        }
    }
    PathMatrix { cells }
}

/// For each node type, compare distances among the surviving nodes before
/// and after deleting every node of that type.
pub fn type_removal_impact(graph: &SemanticGraph) -> Vec<RemovalImpact> {
    let types: Vec<String> = graph
        .type_counts()
        .iter()
        .filter(|(_, &n)| n > 0)
        .map(|(t, _)| t.clone())
        .collect();
    let mut out = Vec::new();
    for t in types {
        let survives: Vec<bool> = (0..graph.node_count())
            .map(|i| graph.node_at(i).node_type != t)
            .collect();
        let mut baseline = (0u64, 0usize);
        let mut removed = (0u64, 0usize);
        let mut newly_unreachable = 0usize;
        for i in 0..graph.node_count() {
            if !survives[i] {
                continue;
            }
            let before = graph.bfs_levels(i, |_| true);
            let after = graph.bfs_levels(i, |v| survives[v]);
            for j in 0..graph.node_count() {
                if i == j || !survives[j] {
                    continue;
                }
                match (before[j], after[j]) {
                    (Some(db), Some(da)) => {
                        baseline.0 += u64::from(db);
                        baseline.1 += 1;
                        removed.0 += u64::from(da);
                        removed.1 += 1;
                    }
                    (Some(db), None) => {
                        baseline.0 += u64::from(db);
                        baseline.1 += 1;
                        newly_unreachable += 1;
                    }
                    (None, _) => {}
                }
            }
        }
        let baseline_mean = (baseline.1 > 0).then(|| baseline.0 as f64 / baseline.1 as f64);
        let removed_mean = (removed.1 > 0).then(|| removed.0 as f64 / removed.1 as f64);
        out.push(RemovalImpact {
            node_type: t,
            remaining_nodes: survives.iter().filter(|&&s| s).count(),
            baseline_mean,
            baseline_reachable: baseline.1,
            removed_mean,
            removed_reachable: removed.1,
            newly_unreachable,
            mean_increase: match (baseline_mean, removed_mean) {
                (Some(b), Some(r)) => Some(r - b),
                _ => None,
            },
        });
    }
    out
}
