//! Seeded random-graph generators and closed-form baselines.
//!
//! All generators draw from a ChaCha8 stream seeded with the caller's
//! 64-bit seed, so a given seed reproduces the same graph bit for bit on
//! every platform.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::GraphError;
use crate::graph::{build_graph, LinkRecord, NodeRecord, SemanticGraph};
use crate::ontology::OntologySchema;

/// Node type of the kept side of generated bipartite graphs.
pub const ACTOR_TYPE: &str = "actor";
/// Node type of the other side.
pub const MOVIE_TYPE: &str = "movie";
/// Link type used in generated bipartite graphs.
pub const MEMBERSHIP_LINK: &str = "appears-in";

/// Parameters of the bipartite null model.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteParams {
    pub actor_count: usize,
    pub movie_count: usize,
    /// Mean number of movies per actor.
    pub mean_actor_degree: f64,
    pub seed: u64,
}

impl BipartiteParams {
    /// Mean actors per movie implied by the side counts: each link touches
    /// one node of each side, so the two means stay proportional to their
    /// side sizes.
    pub fn derived_movie_degree(&self) -> f64 {
        self.mean_actor_degree * self.movie_count as f64 / self.actor_count as f64
    }

    fn check(&self) -> Result<(), GraphError> {
        if self.actor_count == 0 || self.movie_count == 0 {
            return Err(GraphError::EmptySide);
        }
        if !(0.0..=self.movie_count as f64).contains(&self.mean_actor_degree) {
            return Err(GraphError::InvalidMeanDegree {
                mean_degree: self.mean_actor_degree,
                limit: self.movie_count,
            });
        }
        Ok(())
    }
}

/// How bipartite links are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BipartiteMode {
    /// Every actor-movie pair is linked independently with probability
    /// `mean_actor_degree / movie_count`; per-side degrees converge to
    /// Poisson marginals as the sides grow.
    #[default]
    IndependentLinks,
    /// Each actor draws an exact Poisson degree and picks that many
    /// distinct movies uniformly. Sensitivity-check variant.
    PoissonDegrees,
}

fn bipartite_schema() -> OntologySchema {
    let mut s = OntologySchema::new();
    s.declare_node_type(ACTOR_TYPE);
    s.declare_node_type(MOVIE_TYPE);
    s.declare_link_type(MEMBERSHIP_LINK);
    s.allow(ACTOR_TYPE, MEMBERSHIP_LINK, MOVIE_TYPE).unwrap();
    s
}

/// Generate a two-type random bipartite graph with independent links.
pub fn random_bipartite(params: &BipartiteParams) -> Result<SemanticGraph, GraphError> {
    random_bipartite_with_mode(params, BipartiteMode::IndependentLinks)
}

pub fn random_bipartite_with_mode(
    params: &BipartiteParams,
    mode: BipartiteMode,
) -> Result<SemanticGraph, GraphError> {
    params.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let mut nodes = Vec::with_capacity(params.actor_count + params.movie_count);
    for a in 0..params.actor_count {
        nodes.push(NodeRecord::new(format!("a{a}"), ACTOR_TYPE));
    }
    for m in 0..params.movie_count {
        nodes.push(NodeRecord::new(format!("m{m}"), MOVIE_TYPE));
    }

    let mut links = Vec::new();
    match mode {
        BipartiteMode::IndependentLinks => {
            let p = params.mean_actor_degree / params.movie_count as f64;
            for a in 0..params.actor_count {
                for m in 0..params.movie_count {
                    if rng.random::<f64>() < p {
                        links.push(LinkRecord::new(
                            format!("a{a}"),
                            format!("m{m}"),
                            MEMBERSHIP_LINK,
                        ));
                    }
                }
            }
        }
        BipartiteMode::PoissonDegrees => {
            let sampler = if params.mean_actor_degree > 0.0 {
                Some(Poisson::new(params.mean_actor_degree).expect("positive mean"))
            } else {
                None
            };
            for a in 0..params.actor_count {
                let degree = match &sampler {
                    Some(dist) => (dist.sample(&mut rng) as usize).min(params.movie_count),
                    None => 0,
                };
                for m in sample(&mut rng, params.movie_count, degree) {
                    links.push(LinkRecord::new(
                        format!("a{a}"),
                        format!("m{m}"),
                        MEMBERSHIP_LINK,
                    ));
                }
            }
        }
    }

    build_graph(nodes, links, &bipartite_schema())
}

/// Node type used by [`er_random`].
pub const ER_NODE_TYPE: &str = "node";
/// Link type used by [`er_random`].
pub const ER_LINK_TYPE: &str = "link";

/// Uniform random graph: every unordered pair linked independently with
/// probability `p`.
pub fn er_random(n: usize, p: f64, seed: u64) -> Result<SemanticGraph, GraphError> {
    if n == 0 {
        return Err(GraphError::EmptySide);
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(GraphError::InvalidProbability(p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nodes: Vec<NodeRecord> = (0..n)
        .map(|i| NodeRecord::new(format!("v{i}"), ER_NODE_TYPE))
        .collect();
    let mut links = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() < p {
                links.push(LinkRecord::new(format!("v{i}"), format!("v{j}"), ER_LINK_TYPE));
            }
        }
    }
    let schema = OntologySchema::complete([ER_NODE_TYPE], ER_LINK_TYPE);
    build_graph(nodes, links, &schema)
}

/// Closed-form transitivity of the one-mode projection of the bipartite
/// null model with the given mean memberships per kept node.
pub fn predicted_projection_clustering(mean_degree: f64) -> f64 {
    1.0 / (mean_degree + 1.0)
}
