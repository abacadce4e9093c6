//! Toolkit for typed, schema-constrained graphs: build and validate them,
//! characterize them statistically (clustering, per-type connectivity and
//! disparity, degree distributions, path-length matrices), score node and
//! link relevance through transitivity, rescale them (type coarsening,
//! one-mode projection), calibrate against seeded random null models, and
//! extract shortest-path relationship subgraphs.

pub mod detect;
pub mod error;
pub mod graph;
pub mod ingest;
pub mod nullmodel;
pub mod ontology;
pub mod relevance;
pub mod report;
pub mod stats;
pub mod transform;

pub use error::GraphError;
pub use graph::{build_graph, validate, LinkRecord, NodeRecord, SemanticGraph, Violation};
pub use ingest::FileFormatError;
pub use ontology::OntologySchema;
