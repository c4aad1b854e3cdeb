//! Minimum vertex cover: exact branch-and-bound for small components,
//! maximal-matching 2-approximation above the exact limit.

use crate::component::Component;

pub const DEFAULT_EXACT_LIMIT: usize = 24;

/// Returns `(size, exact)`. Multi-edges are irrelevant for covering, so
/// the search runs on the deduplicated simple graph.
pub fn min_vertex_cover_size(c: &Component, exact_limit: usize) -> (usize, bool) {
    let n = c.vertex_count();
    let adj = simple_adjacency(c);
    if n <= exact_limit && n <= 64 {
        let alive = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut best = n; // taking every vertex always covers
        branch(&adj, alive, 0, &mut best);
        (best, true)
    } else {
        (2 * greedy_matching(&adj), false)
    }
}

fn simple_adjacency(c: &Component) -> Vec<u64> {
    let mut adj = vec![0u64; c.vertex_count()];
    for e in c.edges() {
        adj[e.u] |= 1 << e.v;
        adj[e.v] |= 1 << e.u;
    }
    adj
}

fn greedy_matching(adj: &[u64]) -> usize {
    let mut used = 0u64;
    let mut count = 0;
    for u in 0..adj.len() {
        if used & (1 << u) != 0 {
            continue;
        }
        let free = adj[u] & !used & !(1u64 << u);
        if free != 0 {
            let v = free.trailing_zeros() as usize;
            used |= (1 << u) | (1 << v);
            count += 1;
        }
    }
    count
}

fn matching_lower_bound(adj: &[u64], alive: u64) -> usize {
    let mut used = 0u64;
    let mut count = 0;
    let mut rest = alive;
    while rest != 0 {
        let u = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if used & (1 << u) != 0 {
            continue;
        }
        let free = adj[u] & alive & !used;
        if free != 0 {
            let v = free.trailing_zeros() as usize;
            used |= (1 << u) | (1 << v);
            count += 1;
        }
    }
    count
}

fn branch(adj: &[u64], alive: u64, current: usize, best: &mut usize) {
    if current >= *best {
        return;
    }
    // Vertex of maximum remaining degree.
    let mut pick = None;
    let mut max_deg = 0u32;
    let mut rest = alive;
    while rest != 0 {
        let u = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let deg = (adj[u] & alive).count_ones();
        if deg > max_deg {
            max_deg = deg;
            pick = Some(u);
        }
    }
    let Some(u) = pick else {
        // No edges remain.
        *best = (*best).min(current);
        return;
    };
    if max_deg == 1 {
        // Remaining graph is a disjoint matching; one vertex per edge.
        let mut edges = 0;
        let mut seen = 0u64;
        let mut rest = alive;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let nb = adj[v] & alive & !seen;
            if nb != 0 && seen & (1 << v) == 0 {
                seen |= (1 << v) | nb;
                edges += 1;
            }
        }
        *best = (*best).min(current + edges);
        return;
    }
    if current + matching_lower_bound(adj, alive) >= *best {
        return;
    }
    let nbrs = adj[u] & alive;
    // Either u joins the cover, or all of its neighbors do.
    branch(adj, alive & !(1 << u), current + 1, best);
    branch(
        adj,
        alive & !nbrs & !(1 << u),
        current + nbrs.count_ones() as usize,
        best,
    );
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
        net.connected_components().remove(0)
    }

    #[test]
    fn single_edge_cover_is_one() {
        let c = component_of(&[(0, 1)], 2);
        assert_eq!(min_vertex_cover_size(&c, DEFAULT_EXACT_LIMIT), (1, true));
    }

    #[test]
    fn star_cover_is_the_center() {
        let c = component_of(&[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)], 6);
        assert_eq!(min_vertex_cover_size(&c, DEFAULT_EXACT_LIMIT), (1, true));
    }

    #[test]
    fn cycle_cover() {
        // C5 needs 3.
        let c = component_of(&[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)], 5);
        assert_eq!(min_vertex_cover_size(&c, DEFAULT_EXACT_LIMIT), (3, true));
    }

    #[test]
    fn approx_flagged_and_bounded() {
        let c = component_of(&[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)], 5);
        let (exact, _) = min_vertex_cover_size(&c, DEFAULT_EXACT_LIMIT);
        let (approx, flag) = min_vertex_cover_size(&c, 0);
        assert!(!flag);
        assert!(approx >= exact);
        assert!(approx <= 2 * exact);
    }
}
