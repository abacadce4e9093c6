#![allow(dead_code)]

//! Independent brute-force oracles and random fixtures for the acceptance
//! and property suites.
//!
//! The oracle rebuilds its own adjacency from the public node/link records
//! and computes every measure by direct enumeration of the defining
//! formula. It never calls the library's adjacency index or statistics
//! paths, so agreement between the two is meaningful.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use rand::prelude::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semgraph::graph::{LinkRecord, NodeRecord};
use semgraph::ontology::OntologySchema;

pub const REL_TOL: f64 = 1e-12;

pub fn close(a: f64, b: f64) -> bool {
    let scale = a.abs().max(b.abs()).max(1.0);
    (a - b).abs() <= REL_TOL * scale
}

pub fn close_opt(a: Option<f64>, b: Option<f64>) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(x), Some(y)) => close(x, y),
        _ => false,
    }
}

/// Brute-force reference model built from plain records.
pub struct Oracle {
    pub ids: Vec<String>,
    pub node_type: HashMap<String, String>,
    pub neighbors: HashMap<String, BTreeSet<String>>,
    /// Link types joining each unordered pair.
    pub pair_types: HashMap<(String, String), BTreeSet<String>>,
    pub total_nodes: usize,
}

fn unordered(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

impl Oracle {
    pub fn new(nodes: &[NodeRecord], links: &[LinkRecord]) -> Self {
        let mut node_type = HashMap::new();
        let mut neighbors: HashMap<String, BTreeSet<String>> = HashMap::new();
        let mut ids = Vec::new();
        for n in nodes {
            ids.push(n.id.clone());
            node_type.insert(n.id.clone(), n.node_type.clone());
            neighbors.entry(n.id.clone()).or_default();
        }
        let mut pair_types: HashMap<(String, String), BTreeSet<String>> = HashMap::new();
        for l in links {
            neighbors
                .get_mut(&l.source)
                .expect("link source exists")
                .insert(l.target.clone());
            neighbors
                .get_mut(&l.target)
                .expect("link target exists")
                .insert(l.source.clone());
            pair_types
                .entry(unordered(&l.source, &l.target))
                .or_default()
                .insert(l.link_type.clone());
        }
        Self {
            total_nodes: nodes.len(),
            ids,
            node_type,
            neighbors,
            pair_types,
        }
    }

    pub fn degree(&self, id: &str) -> usize {
        self.neighbors[id].len()
    }

    pub fn linked(&self, a: &str, b: &str) -> bool {
        self.neighbors[a].contains(b)
    }

    /// Links among the neighbors of `id`, by double loop.
    pub fn linked_neighbor_pairs(&self, id: &str) -> usize {
        let nbrs: Vec<&String> = self.neighbors[id].iter().collect();
        let mut count = 0;
        for i in 0..nbrs.len() {
            for j in (i + 1)..nbrs.len() {
                if self.linked(nbrs[i], nbrs[j]) {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn clustering(&self, id: &str) -> f64 {
        let k = self.degree(id);
        if k <= 1 {
            return 0.0;
        }
        self.linked_neighbor_pairs(id) as f64 / (k * (k - 1) / 2) as f64
    }

    pub fn graph_clustering(&self) -> f64 {
        let sum: f64 = self.ids.iter().map(|id| self.clustering(id)).sum();
        sum / self.ids.len() as f64
    }

    fn pair_allowed(schema: &OntologySchema, t1: &str, t2: &str) -> bool {
        schema
            .allowed_triples()
            .any(|(s, _, t)| (s == t1 && t == t2) || (s == t2 && t == t1))
    }

    pub fn semantic_clustering(&self, schema: &OntologySchema, id: &str) -> f64 {
        let nbrs: Vec<&String> = self.neighbors[id].iter().collect();
        let mut allowed = 0;
        let mut actual = 0;
        for i in 0..nbrs.len() {
            for j in (i + 1)..nbrs.len() {
                if Self::pair_allowed(
                    schema,
                    &self.node_type[nbrs[i]],
                    &self.node_type[nbrs[j]],
                ) {
                    allowed += 1;
                }
                if self.linked(nbrs[i], nbrs[j]) {
                    actual += 1;
                }
            }
        }
        if allowed == 0 {
            0.0
        } else {
            actual as f64 / allowed as f64
        }
    }

    pub fn neighbors_by_type(&self, id: &str, node_type: &str) -> usize {
        self.neighbors[id]
            .iter()
            .filter(|n| self.node_type[*n] == node_type)
            .count()
    }

    pub fn disparity(&self, id: &str) -> Option<f64> {
        let k = self.degree(id);
        if k == 0 {
            return None;
        }
        let mut per_type: BTreeMap<&str, usize> = BTreeMap::new();
        for n in &self.neighbors[id] {
            *per_type.entry(self.node_type[n].as_str()).or_insert(0) += 1;
        }
        Some(
            per_type
                .values()
                .map(|&c| (c as f64 / k as f64).powi(2))
                .sum(),
        )
    }

    /// Common and union third-party neighbor counts and their ratio.
    pub fn relevance(&self, a: &str, b: &str) -> (usize, usize, f64) {
        let na: HashSet<&String> = self.neighbors[a]
            .iter()
            .filter(|w| w.as_str() != a && w.as_str() != b)
            .collect();
        let nb: HashSet<&String> = self.neighbors[b]
            .iter()
            .filter(|w| w.as_str() != a && w.as_str() != b)
            .collect();
        let common = na.intersection(&nb).count();
        let total = na.union(&nb).count();
        let score = if total == 0 {
            0.0
        } else {
            common as f64 / total as f64
        };
        (common, total, score)
    }

    /// Pair-type matrix of a center node by direct enumeration.
    pub fn pair_type_counts(&self, id: &str) -> BTreeMap<(String, String), usize> {
        let nbrs: Vec<&String> = self.neighbors[id].iter().collect();
        let mut out: BTreeMap<(String, String), usize> = BTreeMap::new();
        for i in 0..nbrs.len() {
            for j in (i + 1)..nbrs.len() {
                if !self.linked(nbrs[i], nbrs[j]) {
                    continue;
                }
                let ti = &self.pair_types[&unordered(id, nbrs[i])];
                let tj = &self.pair_types[&unordered(id, nbrs[j])];
                let mut keys = BTreeSet::new();
                for a in ti {
                    for b in tj {
                        keys.insert(unordered(a, b));
                    }
                }
                for key in keys {
                    *out.entry(key).or_insert(0) += 1;
                }
            }
        }
        out
    }

    pub fn bfs_levels(&self, start: &str) -> HashMap<String, usize> {
        let mut levels = HashMap::new();
        levels.insert(start.to_string(), 0usize);
        let mut queue = VecDeque::from([start.to_string()]);
        while let Some(u) = queue.pop_front() {
            let next = levels[&u] + 1;
            for v in &self.neighbors[&u] {
                if !levels.contains_key(v) {
                    levels.insert(v.clone(), next);
                    queue.push_back(v.clone());
                }
            }
        }
        levels
    }

    pub fn distance(&self, a: &str, b: &str) -> Option<usize> {
        self.bfs_levels(a).get(b).copied()
    }

    /// Distinct node types, their populations, and per-type formula
    /// evaluations used to cross-check the report rows.
    pub fn type_population(&self, node_type: &str) -> usize {
        self.ids
            .iter()
            .filter(|id| self.node_type[*id] == node_type)
            .count()
    }

    pub fn mean_degree(&self, node_type: &str) -> Option<f64> {
        let members: Vec<&String> = self
            .ids
            .iter()
            .filter(|id| self.node_type[*id] == node_type)
            .collect();
        if members.is_empty() {
            return None;
        }
        let sum: usize = members.iter().map(|id| self.degree(id)).sum();
        Some(sum as f64 / members.len() as f64)
    }

    pub fn mean_square_degree(&self, node_type: &str) -> Option<f64> {
        let members: Vec<&String> = self
            .ids
            .iter()
            .filter(|id| self.node_type[*id] == node_type)
            .collect();
        if members.is_empty() {
            return None;
        }
        let sum: f64 = members
            .iter()
            .map(|id| (self.degree(id) as f64).powi(2))
            .sum();
        Some(sum / members.len() as f64)
    }

    pub fn schema_neighbor_types<'a>(
        schema: &'a OntologySchema,
        node_type: &str,
    ) -> BTreeSet<&'a str> {
        let mut out = BTreeSet::new();
        for (s, _, t) in schema.allowed_triples() {
            if s == node_type {
                out.insert(t);
            }
            if t == node_type {
                out.insert(s);
            }
        }
        out
    }

    pub fn neighbors_per_type(&self, schema: &OntologySchema, node_type: &str) -> Option<f64> {
        let k0 = Self::schema_neighbor_types(schema, node_type).len();
        match (self.mean_degree(node_type), k0) {
            (Some(mean), k0) if k0 > 0 => Some(mean / k0 as f64),
            _ => None,
        }
    }

    pub fn degree_dispersion(&self, schema: &OntologySchema, node_type: &str) -> Option<f64> {
        let k0 = Self::schema_neighbor_types(schema, node_type).len();
        match (self.mean_degree(node_type), k0) {
            (Some(mean), k0) if k0 > 0 => {
                let second = self.mean_square_degree(node_type).unwrap();
                Some((second - mean * mean).max(0.0).sqrt() / k0 as f64)
            }
            _ => None,
        }
    }

    /// Mean and dispersion of disparity over degree>=1 nodes of the type.
    pub fn type_disparity(&self, node_type: &str) -> (usize, Option<f64>, Option<f64>) {
        let values: Vec<f64> = self
            .ids
            .iter()
            .filter(|id| self.node_type[*id] == node_type)
            .filter_map(|id| self.disparity(id))
            .collect();
        if values.is_empty() {
            return (0, None, None);
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let second = values.iter().map(|y| y * y).sum::<f64>() / n;
        (
            values.len(),
            Some(mean),
            Some((second - mean * mean).max(0.0).sqrt()),
        )
    }

    pub fn random_baseline(
        &self,
        schema: &OntologySchema,
        node_type: &str,
        literal: bool,
    ) -> f64 {
        let eligible = Self::schema_neighbor_types(schema, node_type);
        let denominator = if literal {
            self.total_nodes
        } else {
            eligible.iter().map(|t| self.type_population(t)).sum()
        };
        if denominator == 0 {
            return 0.0;
        }
        eligible
            .iter()
            .map(|t| (self.type_population(t) as f64 / denominator as f64).powi(2))
            .sum()
    }
}

/// A random typed graph with a random schema: up to `max_nodes` nodes over
/// up to 6 node types, links drawn uniformly (parallel links possible).
pub fn random_typed_input(
    rng: &mut ChaCha8Rng,
    max_nodes: usize,
) -> (Vec<NodeRecord>, Vec<LinkRecord>, OntologySchema) {
    let type_count = rng.random_range(1..=6usize);
    let link_type_count = rng.random_range(1..=3usize);
    let node_types: Vec<String> = (0..type_count).map(|i| format!("t{i}")).collect();
    let link_types: Vec<String> = (0..link_type_count).map(|i| format!("l{i}")).collect();

    let mut schema = OntologySchema::new();
    for t in &node_types {
        schema.declare_node_type(t);
    }
    for l in &link_types {
        schema.declare_link_type(l);
    }
    for i in 0..type_count {
        for j in i..type_count {
            if rng.random::<f64>() < 0.5 {
                let l = link_types.choose(rng).unwrap();
                schema
                    .allow(&node_types[i], l, &node_types[j])
                    .unwrap();
            }
        }
    }

    let n = rng.random_range(2..=max_nodes);
    let nodes: Vec<NodeRecord> = (0..n)
        .map(|i| NodeRecord::new(format!("n{i}"), node_types.choose(rng).unwrap().clone()))
        .collect();

    let link_count = rng.random_range(0..=n * 2);
    let mut links = Vec::new();
    for _ in 0..link_count {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a == b {
            continue;
        }
        links.push(LinkRecord::new(
            format!("n{a}"),
            format!("n{b}"),
            link_types.choose(rng).unwrap().clone(),
        ));
    }
    (nodes, links, schema)
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
