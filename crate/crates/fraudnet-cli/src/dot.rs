//! DOT export of scored components for offline expert review.

use fraudnet::attrs::AttrValue;
use fraudnet::component::Component;
use fraudnet::graph::{EdgeLabel, Network, VertexKind};
use std::collections::BTreeMap;
use std::fmt::Write;

/// Renders one component as a DOT graph. Participants below the score
/// threshold are omitted, along with collisions or vehicles left
/// without any surviving participant neighbor. Vertex size tracks the
/// score; collisions that happened at night are fill-highlighted.
/// Output ordering is deterministic.
pub fn export_dot(
    net: &Network,
    c: &Component,
    scores: &BTreeMap<String, f64>,
    threshold: f64,
) -> String {
    let members = c.members();
    let keep: Vec<bool> = members
        .iter()
        .map(|&v| {
            let label = net.label(v);
            match label.kind {
                VertexKind::Participant => {
                    scores.get(&label.key).copied().unwrap_or(0.0) >= threshold
                }
                _ => true,
            }
        })
        .collect();
    // Drop buckets that lost all their participant neighbors.
    let adj = c.adjacency();
    let keep: Vec<bool> = members
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            keep[i]
                && (net.label(v).kind == VertexKind::Participant
                    || adj[i].iter().any(|&(j, _)| {
                        keep[j] && net.label(members[j]).kind == VertexKind::Participant
                    }))
        })
        .collect();

    let mut out = String::from("graph component {\n");
    out.push_str("  graph [outputorder=edgesfirst];\n");
    for (i, &v) in members.iter().enumerate() {
        if !keep[i] {
            continue;
        }
        let label = net.label(v);
        let shape = match label.kind {
            VertexKind::Participant => "circle",
            VertexKind::Collision => "box",
            VertexKind::Vehicle => "diamond",
        };
        let score = scores.get(&label.key).copied().unwrap_or(0.0);
        let size = 0.3 + 0.25 * score.max(0.0);
        let night = matches!(
            net.attrs(v).get("night"),
            Some(AttrValue::Bool(true))
        );
        let fill = if label.kind == VertexKind::Collision && night {
            ", style=filled, fillcolor=gray70"
        } else {
            ""
        };
        writeln!(
            out,
            "  \"{}\" [shape={shape}, width={size:.3}, label=\"{}\"{fill}];",
            label.key, label.key
        )
        .unwrap();
    }
    let mut edges: Vec<(String, String, &'static str)> = Vec::new();
    for e in c.edges() {
        if !keep[e.u] || !keep[e.v] {
            continue;
        }
        let a = net.label(members[e.u]).key.clone();
        let b = net.label(members[e.v]).key.clone();
        let style = match e.label {
            EdgeLabel::Involved => "solid",
            EdgeLabel::Driver => "bold",
            EdgeLabel::Passenger => "dashed",
            EdgeLabel::VehicleLink => "dotted",
        };
        edges.push((a, b, style));
    }
    edges.sort();
    for (a, b, style) in edges {
        writeln!(out, "  \"{a}\" -- \"{b}\" [style={style}];").unwrap();
    }
    out.push_str("}\n");
    out
}
