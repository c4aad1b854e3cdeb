//! Labeled multigraph with typed vertices, mixed directed/undirected edges
//! and an adjacency index. Networks are immutable once built; all analysis
//! runs on read-only shared references.

use crate::attrs::AttrMap;
use crate::component::Component;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Participant,
    Collision,
    Vehicle,
}

/// Vertex label: entity kind plus the entity's external key.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexLabel {
    pub kind: VertexKind,
    pub key: String,
}

impl VertexLabel {
    pub fn new(kind: VertexKind, key: impl Into<String>) -> Self {
        Self {
            kind,
            key: key.into(),
        }
    }
}

/// Edge label alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeLabel {
    /// Co-involvement in a collision (drivers/vehicles networks).
    Involved,
    /// Driver tied to its collision or vehicle.
    Driver,
    /// Passenger tied to its collision, driver or vehicle.
    Passenger,
    /// Two collisions sharing a vehicle.
    VehicleLink,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub a: VertexId,
    pub b: VertexId,
    pub directed: bool,
    pub label: EdgeLabel,
    /// Passenger count annotation carried by COPTA driver-collision edges.
    pub passenger_count: Option<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Network {
    vertices: Vec<VertexLabel>,
    attrs: Vec<AttrMap>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<EdgeId>>,
}

impl Network {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len() as u32).map(VertexId)
    }

    pub fn label(&self, v: VertexId) -> &VertexLabel {
        &self.vertices[v.0 as usize]
    }

    pub fn attrs(&self, v: VertexId) -> &AttrMap {
        &self.attrs[v.0 as usize]
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0 as usize]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        &self.adjacency[v.0 as usize]
    }

    pub fn contains(&self, v: VertexId) -> bool {
        (v.0 as usize) < self.vertices.len()
    }

    /// Number of edges incident to `v`; multi-edges counted individually,
    /// direction ignored.
    pub fn degree(&self, v: VertexId) -> Result<usize> {
        if !self.contains(v) {
            return Err(Error::UnknownVertex(v));
        }
        Ok(self.adjacency[v.0 as usize].len())
    }

    /// Same vertices and edges with every directedness flag cleared.
    pub fn underlying_undirected(&self) -> Network {
        let mut out = self.clone();
        for e in &mut out.edges {
            e.directed = false;
        }
        out
    }

    /// Checks the adjacency index against the edge list and rejects
    /// self-loops.
    pub fn validate(&self) -> Result<()> {
        let mut expected: Vec<Vec<EdgeId>> = vec![Vec::new(); self.vertices.len()];
        for (i, e) in self.edges.iter().enumerate() {
            if e.a == e.b {
                return Err(Error::SelfLoop(e.a));
            }
            expected[e.a.0 as usize].push(EdgeId(i as u32));
            expected[e.b.0 as usize].push(EdgeId(i as u32));
        }
        for (i, (want, got)) in expected.iter().zip(&self.adjacency).enumerate() {
            if want != got {
                return Err(Error::CorruptAdjacency(VertexId(i as u32)));
            }
        }
        Ok(())
    }

    /// Connected components of the underlying undirected view, ordered by
    /// smallest member vertex id. Empty network yields an empty list.
    pub fn connected_components(&self) -> Vec<Component> {
        let n = self.vertices.len();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0usize;
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            comp[start] = count;
            while let Some(v) = stack.pop() {
                for &e in &self.adjacency[v] {
                    let edge = &self.edges[e.0 as usize];
                    let other = if edge.a.0 as usize == v {
                        edge.b.0 as usize
                    } else {
                        edge.a.0 as usize
                    };
                    if comp[other] == usize::MAX {
                        comp[other] = count;
                        stack.push(other);
                    }
                }
            }
            count += 1;
        }
        // Vertex ids ascend, so component indices already follow the
        // smallest-member ordering.
        let mut members: Vec<Vec<VertexId>> = vec![Vec::new(); count];
        for (v, &c) in comp.iter().enumerate() {
            members[c].push(VertexId(v as u32));
        }
        let mut edges: Vec<Vec<EdgeId>> = vec![Vec::new(); count];
        for (i, e) in self.edges.iter().enumerate() {
            edges[comp[e.a.0 as usize]].push(EdgeId(i as u32));
        }
        members
            .into_iter()
            .zip(edges)
            .map(|(m, e)| Component::from_network(self, m, e))
            .collect()
    }
}

impl Network {
    /// Copy of the network with extra edges appended; adjacency rebuilt.
    pub fn with_extra_edges(&self, extra: Vec<Edge>) -> Network {
        let mut out = self.clone();
        for e in extra {
            assert_ne!(e.a, e.b, "self-loops are not allowed");
            out.edges.push(e);
        }
        out.adjacency = vec![Vec::new(); out.vertices.len()];
        for (i, e) in out.edges.iter().enumerate() {
            out.adjacency[e.a.0 as usize].push(EdgeId(i as u32));
            out.adjacency[e.b.0 as usize].push(EdgeId(i as u32));
        }
        out
    }
}

/// Single-writer construction; dedups vertices by label.
#[derive(Debug, Default)]
pub struct NetworkBuilder {
    vertices: Vec<VertexLabel>,
    attrs: Vec<AttrMap>,
    edges: Vec<Edge>,
    index: std::collections::HashMap<VertexLabel, VertexId>,
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, label: VertexLabel) -> VertexId {
        if let Some(&id) = self.index.get(&label) {
            return id;
        }
        let id = VertexId(self.vertices.len() as u32);
        self.index.insert(label.clone(), id);
        self.vertices.push(label);
        self.attrs.push(AttrMap::new());
        id
    }

    pub fn lookup(&self, label: &VertexLabel) -> Option<VertexId> {
        self.index.get(label).copied()
    }

    pub fn set_attrs(&mut self, v: VertexId, attrs: AttrMap) {
        self.attrs[v.0 as usize] = attrs;
    }

    pub fn attrs_mut(&mut self, v: VertexId) -> &mut AttrMap {
        &mut self.attrs[v.0 as usize]
    }

    pub fn edge(&mut self, a: VertexId, b: VertexId, directed: bool, label: EdgeLabel) -> EdgeId {
        self.edge_with_count(a, b, directed, label, None)
    }

    pub fn edge_with_count(
        &mut self,
        a: VertexId,
        b: VertexId,
        directed: bool,
        label: EdgeLabel,
        passenger_count: Option<u32>,
    ) -> EdgeId {
        assert_ne!(a, b, "self-loops are not allowed at construction");
        let id = EdgeId(self.edges.len() as u32);
        self.edges.push(Edge {
            a,
            b,
            directed,
            label,
            passenger_count,
        });
        id
    }

    pub fn build(self) -> Network {
        let mut adjacency: Vec<Vec<EdgeId>> = vec![Vec::new(); self.vertices.len()];
        for (i, e) in self.edges.iter().enumerate() {
            adjacency[e.a.0 as usize].push(EdgeId(i as u32));
            adjacency[e.b.0 as usize].push(EdgeId(i as u32));
        }
        Network {
            vertices: self.vertices,
            attrs: self.attrs,
            edges: self.edges,
            adjacency,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn participant(key: &str) -> VertexLabel {
        VertexLabel::new(VertexKind::Participant, key)
    }

    pub(crate) fn path_network(n: usize) -> Network {
        let mut b = NetworkBuilder::new();
        let ids: Vec<_> = (0..n).map(|i| b.vertex(participant(&format!("p{i}")))).collect();
        for w in ids.windows(2) {
            b.edge(w[0], w[1], false, EdgeLabel::Involved);
        }
        b.build()
    }

    #[test]
    fn degree_counts_multi_edges() {
        let mut b = NetworkBuilder::new();
        let a = b.vertex(participant("a"));
        let c = b.vertex(participant("c"));
        b.edge(a, c, false, EdgeLabel::Involved);
        b.edge(a, c, true, EdgeLabel::Involved);
        let net = b.build();
        assert_eq!(net.degree(a).unwrap(), 2);
        assert_eq!(net.degree(c).unwrap(), 2);
        assert!(net.degree(VertexId(9)).is_err());
    }

    #[test]
    fn isolated_vertex_has_degree_zero() {
        let mut b = NetworkBuilder::new();
        let a = b.vertex(participant("a"));
        let net = b.build();
        assert_eq!(net.degree(a).unwrap(), 0);
    }

    #[test]
    fn star_center_degree() {
        let mut b = NetworkBuilder::new();
        let c = b.vertex(participant("center"));
        for i in 0..4 {
            let s = b.vertex(participant(&format!("s{i}")));
            b.edge(c, s, false, EdgeLabel::Involved);
        }
        assert_eq!(b.build().degree(c).unwrap(), 4);
    }

    #[test]
    fn two_triangles_give_two_components() {
        let mut b = NetworkBuilder::new();
        for t in 0..2 {
            let v: Vec<_> = (0..3)
                .map(|i| b.vertex(participant(&format!("t{t}-{i}"))))
                .collect();
            b.edge(v[0], v[1], false, EdgeLabel::Involved);
            b.edge(v[1], v[2], false, EdgeLabel::Involved);
            b.edge(v[0], v[2], false, EdgeLabel::Involved);
        }
        let comps = b.build().connected_components();
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.vertex_count() == 3));
    }

    #[test]
    fn empty_network_has_no_components() {
        let net = NetworkBuilder::new().build();
        assert!(net.connected_components().is_empty());
    }

    #[test]
    fn underlying_undirected_is_idempotent() {
        let mut b = NetworkBuilder::new();
        let a = b.vertex(participant("a"));
        let c = b.vertex(participant("b"));
        b.edge(a, c, true, EdgeLabel::Involved);
        b.edge(c, a, true, EdgeLabel::Involved);
        let net = b.build();
        let und = net.underlying_undirected();
        assert_eq!(und.edge_count(), 2);
        assert!(und.edges().iter().all(|e| !e.directed));
        let twice = und.underlying_undirected();
        assert_eq!(und.edges(), twice.edges());
        // Degree sums unchanged by dropping direction.
        assert_eq!(net.degree(a).unwrap(), und.degree(a).unwrap());
    }

    #[test]
    fn validate_catches_consistent_index() {
        let net = path_network(4);
        net.validate().unwrap();
    }

    #[test]
    fn handshake_lemma() {
        let net = path_network(7);
        let total: usize = net.vertex_ids().map(|v| net.degree(v).unwrap()).sum();
        assert_eq!(total, 2 * net.edge_count());
    }
}
