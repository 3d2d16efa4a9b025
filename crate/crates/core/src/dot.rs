//! Graphviz export.

use std::fmt::Write;

use crate::graph::{Coloring, EdgeKind, Side, StructuredGraph, VertexKind};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\\\""))
}

/// Deterministic DOT text: one node line per vertex in id order, then one
/// line per edge. Colors, when given, are appended to the node labels.
pub fn export_dot(g: &StructuredGraph, f: Option<&Coloring>) -> String {
    let mut out = String::from("graph G {\n");
    for (id, kind) in g.vertices() {
        let (shape, style) = match kind {
            VertexKind::Anchor => ("box", "bold"),
            VertexKind::TreeVertex { root: true, .. } => ("doublecircle", "solid"),
            VertexKind::TreeVertex { .. } => ("circle", "solid"),
            VertexKind::Plain => ("circle", "filled"),
            VertexKind::Auxiliary => ("point", "filled"),
        };
        let label = match f {
            Some(f) => format!("{id}\\n{}", f.get(id)),
            None => id.to_string(),
        };
        let _ = writeln!(
            out,
            "  {} [shape={shape}, style={style}, label={}];",
            quote(id),
            quote(&label)
        );
    }
    for e in g.edges() {
        let attrs = match &e.kind {
            EdgeKind::AnchorRoot => " [style=dashed]",
            EdgeKind::ParentChild {
                side: Side::Left, ..
            } => " [label=\"L\"]",
            EdgeKind::ParentChild {
                side: Side::Right, ..
            } => " [label=\"R\"]",
            EdgeKind::Unlabeled => "",
        };
        let _ = writeln!(out, "  {} -- {}{attrs};", quote(&e.a), quote(&e.b));
    }
    out.push_str("}\n");
    out
}
