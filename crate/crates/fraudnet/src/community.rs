//! Community splitting for oversized components: recursively remove the
//! highest-betweenness edge until every piece fits under the size cap.

use crate::centrality::{edge_betweenness, GeodesicCounting};
use crate::component::Component;
use crate::error::Result;

pub const DEFAULT_MAX_SIZE: usize = 30;

/// Splits a component by repeated removal of the maximal edge-betweenness
/// edge (ties broken by smallest edge id). Vertices are never removed;
/// the returned pieces partition the input vertex set.
pub fn split_communities(c: &Component, max_size: usize) -> Result<Vec<Component>> {
    assert!(max_size >= 2, "max_size must be at least 2");
    let mut done = Vec::new();
    let mut work = vec![c.clone()];
    while let Some(piece) = work.pop() {
        if piece.vertex_count() <= max_size || piece.edge_count() == 0 {
            done.push(piece);
            continue;
        }
        let scores = edge_betweenness(&piece, GeodesicCounting::Fractional)?;
        let (&target, _) = scores
            .iter()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap().then(b.0.cmp(a.0)))
            .expect("non-empty edge set");
        let kept: Vec<_> = piece
            .edges()
            .iter()
            .filter(|e| e.id != target)
            .cloned()
            .collect();
        let reduced = Component::from_parts(piece.members().to_vec(), kept);
        work.extend(reduced.split_connected());
    }
    done.sort_by_key(|p| p.key());
    Ok(done)
}
