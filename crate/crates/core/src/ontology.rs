//! Schema layer: which node types exist, which link types exist, and which
//! typed links are allowed to connect which node types.

use std::collections::BTreeSet;

use crate::error::GraphError;

/// A schema over node and link types.
///
/// Allowed triples `(source type, link type, target type)` are stored as
/// declared but treated as symmetric everywhere: a triple permits links in
/// either orientation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OntologySchema {
    node_types: BTreeSet<String>,
    link_types: BTreeSet<String>,
    allowed: BTreeSet<(String, String, String)>,
}

impl OntologySchema {
    pub fn new() -> Self {
        Self::default()
    }

    /// A schema with the given node types, one link type, and every pair of
    /// node types (including self-pairs) allowed.
    pub fn complete<I, S>(node_types: I, link_type: &str) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut schema = Self::new();
        for t in node_types {
            schema.declare_node_type(t);
        }
        schema.declare_link_type(link_type);
        let types: Vec<String> = schema.node_types.iter().cloned().collect();
        for a in &types {
            for b in &types {
                if a <= b {
                    schema
                        .allowed
                        .insert((a.clone(), link_type.to_string(), b.clone()));
                }
            }
        }
        schema
    }

    pub fn declare_node_type(&mut self, name: impl Into<String>) {
        self.node_types.insert(name.into());
    }

    pub fn declare_link_type(&mut self, name: impl Into<String>) {
        self.link_types.insert(name.into());
    }

    /// Register an allowed triple. Both orientations become legal.
    pub fn allow(
        &mut self,
        source_type: &str,
        link_type: &str,
        target_type: &str,
    ) -> Result<(), GraphError> {
        if !self.node_types.contains(source_type) {
            return Err(GraphError::UnknownNodeType(source_type.to_string()));
        }
        if !self.node_types.contains(target_type) {
            return Err(GraphError::UnknownNodeType(target_type.to_string()));
        }
        if !self.link_types.contains(link_type) {
            return Err(GraphError::UnknownLinkType(link_type.to_string()));
        }
        self.allowed.insert((
            source_type.to_string(),
            link_type.to_string(),
            target_type.to_string(),
        ));
        Ok(())
    }

    pub fn node_types(&self) -> impl Iterator<Item = &str> {
        self.node_types.iter().map(String::as_str)
    }

    pub fn link_types(&self) -> impl Iterator<Item = &str> {
        self.link_types.iter().map(String::as_str)
    }

    pub fn allowed_triples(&self) -> impl Iterator<Item = (&str, &str, &str)> {
        self.allowed
            .iter()
            .map(|(s, l, t)| (s.as_str(), l.as_str(), t.as_str()))
    }

    pub fn has_node_type(&self, name: &str) -> bool {
        self.node_types.contains(name)
    }

    pub fn has_link_type(&self, name: &str) -> bool {
        self.link_types.contains(name)
    }

    /// Whether a link of `link_type` may join the two node types, in either
    /// orientation.
    pub fn is_allowed(&self, source_type: &str, link_type: &str, target_type: &str) -> bool {
        self.allowed.contains(&(
            source_type.to_string(),
            link_type.to_string(),
            target_type.to_string(),
        )) || self.allowed.contains(&(
            target_type.to_string(),
            link_type.to_string(),
            source_type.to_string(),
        ))
    }

    /// Whether any link type at all may join the two node types.
    pub fn allows_pair(&self, type_a: &str, type_b: &str) -> bool {
        self.allowed.iter().any(|(s, _, t)| {
            (s == type_a && t == type_b) || (s == type_b && t == type_a)
        })
    }

    /// The set of node types that may neighbor `node_type` under this schema.
    pub fn allowed_neighbor_types(&self, node_type: &str) -> Result<BTreeSet<&str>, GraphError> {
        if !self.node_types.contains(node_type) {
            return Err(GraphError::UnknownNodeType(node_type.to_string()));
        }
        let mut out = BTreeSet::new();
        for (s, _, t) in &self.allowed {
            if s == node_type {
                out.insert(t.as_str());
            }
            if t == node_type {
                out.insert(s.as_str());
            }
        }
        Ok(out)
    }

    /// How many distinct node types may neighbor `node_type`.
    pub fn allowed_neighbor_type_count(&self, node_type: &str) -> Result<usize, GraphError> {
        Ok(self.allowed_neighbor_types(node_type)?.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::meeting_schema;

    #[test]
    fn neighbor_types_for_person() {
        let s = meeting_schema();
        let v: Vec<&str> = s.allowed_neighbor_types("person").unwrap().into_iter().collect();
        assert_eq!(v, vec!["city", "meeting", "person"]);
        assert_eq!(s.allowed_neighbor_type_count("person").unwrap(), 3);
    }

    #[test]
    fn neighbor_types_for_meeting_exclude_self() {
        let s = meeting_schema();
        let v: Vec<&str> = s.allowed_neighbor_types("meeting").unwrap().into_iter().collect();
        assert_eq!(v, vec!["city", "person"]);
        assert_eq!(s.allowed_neighbor_type_count("meeting").unwrap(), 2);
    }

    #[test]
    fn type_without_triples_has_empty_neighbor_set() {
        let mut s = OntologySchema::new();
        s.declare_node_type("orphan");
        assert!(s.allowed_neighbor_types("orphan").unwrap().is_empty());
        assert_eq!(s.allowed_neighbor_type_count("orphan").unwrap(), 0);
    }

    #[test]
    fn unknown_type_is_an_error() {
        let s = meeting_schema();
        assert_eq!(
            s.allowed_neighbor_types("weapon").unwrap_err(),
            GraphError::UnknownNodeType("weapon".into())
        );
    }

    #[test]
    fn allow_rejects_undeclared_types() {
        let mut s = OntologySchema::new();
        s.declare_node_type("person");
        s.declare_link_type("knows");
        assert!(s.allow("person", "knows", "weapon").is_err());
        assert!(s.allow("person", "owns", "person").is_err());
    }

    #[test]
    fn triples_are_symmetric_for_lookup() {
        let s = meeting_schema();
        assert!(s.is_allowed("meeting", "attended", "person"));
        assert!(s.allows_pair("city", "meeting"));
        assert!(!s.allows_pair("meeting", "meeting"));
    }

    #[test]
    fn complete_schema_allows_everything() {
        let s = OntologySchema::complete(["a", "b"], "link");
        assert!(s.allows_pair("a", "a"));
        assert!(s.allows_pair("a", "b"));
        assert!(s.allows_pair("b", "b"));
        assert_eq!(s.allowed_neighbor_type_count("a").unwrap(), 2);
    }
}
