//! Geodesic counting on the undirected multigraph view: edge betweenness
//! and the four vertex centralities used as suspicion baselines.

use crate::component::Component;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, VertexId};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CentralityKind {
    BetCen,
    CloCen,
    DegCen,
    EigCen,
}

/// How geodesic multiplicity is credited to an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GeodesicCounting {
    /// Each of a pair's k geodesics contributes 1/k, so per-pair totals 1.
    #[default]
    Fractional,
    /// Every geodesic contributes 1.
    Raw,
}

/// BFS distances and geodesic counts from every source. Parallel edges
/// multiply the path count, so a double edge carries two geodesics.
struct Geodesics {
    n: usize,
    dist: Vec<Vec<u32>>,
    sigma: Vec<Vec<f64>>,
}

impl Geodesics {
    fn compute(c: &Component) -> Result<Self> {
        let n = c.vertex_count();
        let adj = c.adjacency();
        let mut dist = Vec::with_capacity(n);
        let mut sigma = Vec::with_capacity(n);
        for s in 0..n {
            let mut d = vec![u32::MAX; n];
            let mut sg = vec![0.0; n];
            d[s] = 0;
            sg[s] = 1.0;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &(w, _) in &adj[v] {
                    if d[w] == u32::MAX {
                        d[w] = d[v] + 1;
                        queue.push_back(w);
                    }
                    if d[w] == d[v] + 1 {
                        sg[w] += sg[v];
                    }
                }
            }
            if d.iter().any(|&x| x == u32::MAX) {
                return Err(Error::Disconnected);
            }
            dist.push(d);
            sigma.push(sg);
        }
        Ok(Self { n, dist, sigma })
    }
}

/// Per-edge geodesic traffic over all unordered vertex pairs.
pub fn edge_betweenness(c: &Component, mode: GeodesicCounting) -> Result<BTreeMap<EdgeId, f64>> {
    let g = Geodesics::compute(c)?;
    let mut scores = vec![0.0; c.edge_count()];
    for s in 0..g.n {
        for t in (s + 1)..g.n {
            let total = g.sigma[s][t];
            for (i, e) in c.edges().iter().enumerate() {
                let mut through = 0.0;
                // Orientation u -> v on an s..t geodesic.
                if g.dist[s][e.u] + 1 + g.dist[t][e.v] == g.dist[s][t] {
                    through += g.sigma[s][e.u] * g.sigma[t][e.v];
                }
                if g.dist[s][e.v] + 1 + g.dist[t][e.u] == g.dist[s][t] {
                    through += g.sigma[s][e.v] * g.sigma[t][e.u];
                }
                scores[i] += match mode {
                    GeodesicCounting::Fractional => through / total,
                    GeodesicCounting::Raw => through,
                };
            }
        }
    }
    Ok(c
        .edges()
        .iter()
        .zip(scores)
        .map(|(e, s)| (e.id, s))
        .collect())
}

/// Betweenness centrality with fractional geodesic counting.
pub fn betweenness_centrality(c: &Component) -> Result<Vec<f64>> {
    let g = Geodesics::compute(c)?;
    let mut scores = vec![0.0; g.n];
    for s in 0..g.n {
        for t in (s + 1)..g.n {
            for v in 0..g.n {
                if v == s || v == t {
                    continue;
                }
                if g.dist[s][v] + g.dist[v][t] == g.dist[s][t] {
                    scores[v] += g.sigma[s][v] * g.sigma[t][v] / g.sigma[s][t];
                }
            }
        }
    }
    Ok(scores)
}

/// Mean distance to every other vertex, exactly as printed in the source
/// formulation: low means central. Ranking orientation is left to callers.
pub fn closeness_centrality(c: &Component) -> Result<Vec<f64>> {
    let n = c.vertex_count();
    if n == 1 {
        return Ok(vec![0.0]);
    }
    let adj = c.adjacency();
    let mut out = Vec::with_capacity(n);
    for v in 0..n {
        let mut sum = 0u64;
        for d in c.bfs_with(&adj, v) {
            sum += d.ok_or(Error::Disconnected)? as u64;
        }
        out.push(sum as f64 / (n - 1) as f64);
    }
    Ok(out)
}

pub fn degree_centrality(c: &Component) -> Vec<f64> {
    let n = c.vertex_count();
    if n == 1 {
        return vec![0.0];
    }
    (0..n)
        .map(|v| c.degree_local(v) as f64 / (n - 1) as f64)
        .collect()
}

/// Dominant eigenvector of the undirected adjacency (multi-edges weighted
/// by multiplicity), unit L2 norm, nonnegative orientation. Power
/// iteration runs on A + I so bipartite components cannot oscillate.
/// Returns the vector together with the dominant eigenvalue of A.
pub fn eigenvector_centrality(c: &Component) -> Result<(Vec<f64>, f64)> {
    let n = c.vertex_count();
    if n < 2 {
        return Err(Error::EigenvectorUndefined);
    }
    if !c.is_connected() {
        return Err(Error::Disconnected);
    }
    let adj = c.adjacency();
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut next = vec![0.0; n];
    for _ in 0..100_000 {
        for v in 0..n {
            let mut acc = x[v]; // the +I shift
            for &(w, _) in &adj[v] {
                acc += x[w];
            }
            next[v] = acc;
        }
        let norm = next.iter().map(|y| y * y).sum::<f64>().sqrt();
        for y in next.iter_mut() {
            *y /= norm;
        }
        let delta = x
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        std::mem::swap(&mut x, &mut next);
        if delta < 1e-15 {
            break;
        }
    }
    if x.iter().sum::<f64>() < 0.0 {
        for y in x.iter_mut() {
            *y = -*y;
        }
    }
    // Rayleigh quotient of A itself (x is unit-norm).
    let mut lambda = 0.0;
    for v in 0..n {
        for &(w, _) in &adj[v] {
            lambda += x[v] * x[w];
        }
    }
    Ok((x, lambda))
}

/// Dispatch over the four baseline centralities, keyed by member vertex id.
pub fn centrality(c: &Component, kind: CentralityKind) -> Result<BTreeMap<VertexId, f64>> {
    let scores = match kind {
        CentralityKind::BetCen => betweenness_centrality(c)?,
        CentralityKind::CloCen => closeness_centrality(c)?,
        CentralityKind::DegCen => degree_centrality(c),
        CentralityKind::EigCen => eigenvector_centrality(c)?.0,
    };
    Ok(c.members().iter().copied().zip(scores).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{EdgeLabel, NetworkBuilder, VertexKind, VertexLabel};

    fn component_of(edges: &[(u32, u32)], n: usize) -> Component {
        let mut b = NetworkBuilder::new();
        let ids: Vec<_> = (0..n)
            .map(|i| b.vertex(VertexLabel::new(VertexKind::Participant, format!("p{i}"))))
            .collect();
        for &(u, v) in edges {
            b.edge(ids[u as usize], ids[v as usize], false, EdgeLabel::Involved);
        }
        let net = b.build();
        let mut comps = net.connected_components();
        assert_eq!(comps.len(), 1);
        comps.remove(0)
    }

    #[test]
    fn path_edge_betweenness() {
        // a-b-c: edge (a,b) carries pairs {a,b} and {a,c}.
        let c = component_of(&[(0, 1), (1, 2)], 3);
        let scores = edge_betweenness(&c, GeodesicCounting::Fractional).unwrap();
        assert!((scores[&EdgeId(0)] - 2.0).abs() < 1e-12);
        assert!((scores[&EdgeId(1)] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn barbell_bridge_has_highest_betweenness() {
        // Two triangles joined by a bridge (edge 6).
        let c = component_of(
            &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)],
            6,
        );
        let scores = edge_betweenness(&c, GeodesicCounting::Fractional).unwrap();
        let bridge = scores[&EdgeId(6)];
        for (&e, &s) in &scores {
            if e != EdgeId(6) {
                assert!(bridge > s, "bridge must dominate edge {e}");
            }
        }
    }

    #[test]
    fn parallel_edges_split_traffic() {
        let c = component_of(&[(0, 1), (0, 1)], 2);
        let scores = edge_betweenness(&c, GeodesicCounting::Fractional).unwrap();
        assert!((scores[&EdgeId(0)] - 0.5).abs() < 1e-12);
        assert!((scores[&EdgeId(1)] - 0.5).abs() < 1e-12);
        let raw = edge_betweenness(&c, GeodesicCounting::Raw).unwrap();
        assert!((raw[&EdgeId(0)] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn path_middle_betweenness() {
        let c = component_of(&[(0, 1), (1, 2)], 3);
        let scores = betweenness_centrality(&c).unwrap();
        assert!((scores[1] - 1.0).abs() < 1e-12);
        assert_eq!(scores[0], 0.0);
    }

    #[test]
    fn star_degree_centrality() {
        let c = component_of(&[(0, 1), (0, 2), (0, 3), (0, 4)], 5);
        let scores = degree_centrality(&c);
        assert!((scores[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn k4_eigenvector_is_uniform() {
        let c = component_of(&[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], 4);
        let (x, lambda) = eigenvector_centrality(&c).unwrap();
        for v in x {
            assert!((v - 0.5).abs() < 1e-9);
        }
        assert!((lambda - 3.0).abs() < 1e-9);
    }

    #[test]
    fn bipartite_path_converges() {
        let c = component_of(&[(0, 1)], 2);
        let (x, lambda) = eigenvector_centrality(&c).unwrap();
        assert!((x[0] - x[1]).abs() < 1e-9);
        assert!((lambda - 1.0).abs() < 1e-9);
    }

    #[test]
    fn eigcen_rejects_single_vertex() {
        let mut b = NetworkBuilder::new();
        b.vertex(VertexLabel::new(VertexKind::Participant, "a"));
        let net = b.build();
        let c = net.connected_components().remove(0);
        assert!(eigenvector_centrality(&c).is_err());
        assert_eq!(centrality(&c, CentralityKind::CloCen).unwrap()[&VertexId(0)], 0.0);
    }

    #[test]
    fn cycle_is_vertex_transitive_for_all_kinds() {
        let c = component_of(&[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)], 5);
        for kind in [
            CentralityKind::BetCen,
            CentralityKind::CloCen,
            CentralityKind::DegCen,
            CentralityKind::EigCen,
        ] {
            let scores = centrality(&c, kind).unwrap();
            let vals: Vec<f64> = scores.values().copied().collect();
            for w in vals.windows(2) {
                assert!((w[0] - w[1]).abs() < 1e-9, "{kind:?} not uniform");
            }
        }
    }
}
