use thiserror::Error;

/// Error type shared by graph construction and every analysis operation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("duplicate node id `{0}`")]
    DuplicateNodeId(String),
    #[error("link endpoint `{0}` is not a known node")]
    MissingEndpoint(String),
    #[error("self-loop on `{0}` is not allowed")]
    SelfLoop(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("unknown node type `{0}`")]
    UnknownNodeType(String),
    #[error("unknown link type `{0}`")]
    UnknownLinkType(String),
    #[error("graph has no nodes")]
    EmptyGraph,
    #[error("disparity is undefined for `{0}`: node has no neighbors")]
    DisparityUndefined(String),
    #[error("endpoints must be distinct, got `{0}` twice")]
    IdenticalEndpoints(String),
    #[error("threshold {0} is outside [0, 1]")]
    InvalidThreshold(f64),
    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
    #[error("deviation factor must be positive, got {0}")]
    InvalidDeviationFactor(f64),
    #[error("mean degree {mean_degree} is invalid: must be in [0, {limit}]")]
    InvalidMeanDegree { mean_degree: f64, limit: usize },
    #[error("generator requires at least one node on each side")]
    EmptySide,
    #[error("merge map does not cover node type `{0}`")]
    MergeMapIncomplete(String),
    #[error("projection requires two distinct node types, got `{0}` for both sides")]
    ProjectionSameType(String),
    #[error("link {a}-{b} breaks the bipartite precondition: both endpoints have type `{node_type}`")]
    NotBipartite {
        a: String,
        b: String,
        node_type: String,
    },
    #[error("node `{0}` is excluded by the detection constraints")]
    EndpointExcluded(String),
}
