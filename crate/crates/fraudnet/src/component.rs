//! A connected component of a network: member vertices, member edges
//! (endpoints held as local indices so rewired variants are cheap to build)
//! and the structural statistics computed on its undirected view.

use crate::error::{Error, Result};
use crate::graph::{EdgeId, EdgeLabel, Network, VertexId};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq)]
pub struct CompEdge {
    /// Edge id in the parent network; retained through rewiring.
    pub id: EdgeId,
    /// Local endpoint indices into `members`.
    pub u: usize,
    pub v: usize,
    pub label: EdgeLabel,
    pub directed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    members: Vec<VertexId>,
    edges: Vec<CompEdge>,
}

impl Component {
    pub fn from_network(net: &Network, mut members: Vec<VertexId>, edge_ids: Vec<EdgeId>) -> Self {
        members.sort_unstable();
        let local: BTreeMap<VertexId, usize> =
            members.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges = edge_ids
            .into_iter()
            .map(|id| {
                let e = net.edge(id);
                CompEdge {
                    id,
                    u: local[&e.a],
                    v: local[&e.b],
                    label: e.label,
                    directed: e.directed,
                }
            })
            .collect();
        Self { members, edges }
    }

    /// Builds a component from raw parts; used by rewiring and tests.
    pub fn from_parts(members: Vec<VertexId>, edges: Vec<CompEdge>) -> Self {
        Self { members, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.members.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn members(&self) -> &[VertexId] {
        &self.members
    }

    pub fn edges(&self) -> &[CompEdge] {
        &self.edges
    }

    /// Smallest member vertex id; stable key for ordering and seed
    /// derivation.
    pub fn key(&self) -> VertexId {
        self.members[0]
    }

    pub fn local_index(&self, v: VertexId) -> Option<usize> {
        self.members.binary_search(&v).ok()
    }

    /// Adjacency on local indices: `(neighbor, edge index)` pairs,
    /// direction ignored.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.members.len()];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.u].push((e.v, i));
            adj[e.v].push((e.u, i));
        }
        adj
    }

    pub fn degree_local(&self, i: usize) -> usize {
        self.edges
            .iter()
            .map(|e| (e.u == i) as usize + (e.v == i) as usize)
            .sum()
    }

    pub fn degree_multiset(&self) -> Vec<usize> {
        let mut degs = vec![0usize; self.members.len()];
        for e in &self.edges {
            degs[e.u] += 1;
            degs[e.v] += 1;
        }
        degs.sort_unstable();
        degs
    }

    /// BFS hop counts from local index `src`; `None` for unreachable
    /// vertices.
    pub fn bfs(&self, src: usize) -> Vec<Option<u32>> {
        let adj = self.adjacency();
        self.bfs_with(&adj, src)
    }

    pub(crate) fn bfs_with(&self, adj: &[Vec<(usize, usize)>], src: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.members.len()];
        dist[src] = Some(0);
        let mut queue = std::collections::VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            for &(w, _) in &adj[v] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Hop counts on the undirected view from vertex `v`.
    pub fn distances_from(&self, v: VertexId) -> Result<BTreeMap<VertexId, u32>> {
        let src = self
            .local_index(v)
            .ok_or(Error::VertexNotInComponent(v))?;
        let dist = self.bfs(src);
        Ok(self
            .members
            .iter()
            .zip(dist)
            .filter_map(|(&m, d)| d.map(|d| (m, d)))
            .collect())
    }

    pub fn is_connected(&self) -> bool {
        if self.members.is_empty() {
            return false;
        }
        self.bfs(0).iter().all(Option::is_some)
    }

    /// Max over all-pairs distances; single vertex gives 0.
    pub fn diameter(&self) -> Result<u32> {
        if self.members.is_empty() {
            return Err(Error::EmptyComponent);
        }
        let adj = self.adjacency();
        let mut max = 0;
        for src in 0..self.members.len() {
            for d in self.bfs_with(&adj, src) {
                match d {
                    Some(d) => max = max.max(d),
                    None => return Err(Error::Disconnected),
                }
            }
        }
        Ok(max)
    }

    /// True iff the undirected multigraph view holds a cycle; a pair of
    /// parallel edges counts.
    pub fn is_cyclic(&self) -> bool {
        self.edges.len() >= self.members.len()
    }

    /// Harmonic-mean-distance statistic over all vertex pairs including
    /// self-pairs, whose 1/d(v,v) term is taken as 0.
    pub fn l_inverse(&self) -> Result<f64> {
        let n = self.members.len();
        if n == 0 {
            return Err(Error::EmptyComponent);
        }
        let adj = self.adjacency();
        let mut sum = 0.0;
        for src in 0..n {
            for (dst, d) in self.bfs_with(&adj, src).into_iter().enumerate() {
                let d = d.ok_or(Error::Disconnected)?;
                if dst < src && d > 0 {
                    sum += 1.0 / d as f64;
                }
            }
        }
        Ok(sum / (0.5 * n as f64 * (n + 1) as f64))
    }

    /// Largest connected piece of the undirected view; ties broken by
    /// smallest member vertex id. Rewired components may be disconnected
    /// and connectivity-requiring statistics are evaluated on this piece.
    pub fn largest_connected_piece(&self) -> Component {
        if self.members.is_empty() {
            return self.clone();
        }
        let adj = self.adjacency();
        let n = self.members.len();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            comp[start] = count;
            while let Some(v) = stack.pop() {
                for &(w, _) in &adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        let mut sizes = vec![0usize; count];
        for &c in &comp {
            sizes[c] += 1;
        }
        let best = sizes
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .map(|(i, _)| i)
            .unwrap();
        self.restrict(&comp.iter().map(|&c| c == best).collect::<Vec<_>>())
    }

    /// Sub-component induced by the flagged local vertices, keeping only
    /// edges with both endpoints flagged. Not necessarily connected.
    pub fn restrict(&self, keep: &[bool]) -> Component {
        let mut remap = vec![usize::MAX; self.members.len()];
        let mut members = Vec::new();
        for (i, &k) in keep.iter().enumerate() {
            if k {
                remap[i] = members.len();
                members.push(self.members[i]);
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| keep[e.u] && keep[e.v])
            .map(|e| CompEdge {
                id: e.id,
                u: remap[e.u],
                v: remap[e.v],
                label: e.label,
                directed: e.directed,
            })
            .collect();
        Component { members, edges }
    }

    /// Splits the (possibly disconnected) edge/vertex sets into connected
    /// pieces, ordered by smallest member vertex id.
    pub fn split_connected(&self) -> Vec<Component> {
        let n = self.members.len();
        if n == 0 {
            return Vec::new();
        }
        let adj = self.adjacency();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            comp[start] = count;
            while let Some(v) = stack.pop() {
                for &(w, _) in &adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (0..count)
            .map(|c| self.restrict(&comp.iter().map(|&x| x == c).collect::<Vec<_>>()))
            .collect()
    }
}
