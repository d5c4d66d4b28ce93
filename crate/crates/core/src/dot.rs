use std::fmt::Write;

use crate::coloring::{EdgeColor, EdgeColoring};
use crate::planar::PlaneGraph;

fn attrs(c: Option<EdgeColor>) -> &'static str {
    match c {
        None => "",
        Some(EdgeColor::Red) => " [color=red]",
        Some(EdgeColor::Green) => " [color=green]",
        Some(EdgeColor::Blue) => " [color=blue]",
        Some(EdgeColor::Black) => " [color=black]",
        // two parallel strokes around an invisible core
        Some(EdgeColor::Yellow) => " [color=\"gold:invis:gold\", penwidth=2]",
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT text for a graph with optional per-edge colors and vertex labels.
/// Nodes come in index order and edges in the host's edge order.
pub fn export_dot_with(host: &PlaneGraph, colors: &[Option<EdgeColor>], labels: Option<&[String]>) -> String {
    let name = |v: usize| labels.map_or_else(|| v.to_string(), |l| quote(&l[v]));
    let mut out = String::from("graph G {\n  node [shape=circle];\n");
    for v in 0..host.n() {
        writeln!(out, "  {};", name(v)).unwrap();
    }
    for (i, e) in host.edges().iter().enumerate() {
        let (u, v) = e.ends();
        writeln!(
            out,
            "  {} -- {}{};",
            name(u),
            name(v),
            attrs(colors.get(i).copied().flatten())
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn export_dot(host: &PlaneGraph, coloring: Option<&EdgeColoring>) -> String {
    let colors: Vec<Option<EdgeColor>> = match coloring {
        Some(t) => t.0.iter().copied().map(Some).collect(),
        None => Vec::new(),
    };
    export_dot_with(host, &colors, None)
}
