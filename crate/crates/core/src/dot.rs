//! Graphviz output for taikos and middle links.

use std::fmt::Write;

use crate::horizontal::{HorizontalError, OrientedSkeleton};
use crate::midlink::{LinkVertex, MiddleLink};
use crate::partition::Subpartition;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f",
];

fn color(class: usize) -> &'static str {
    PALETTE[class % PALETTE.len()]
}

/// The taiko with A at the bottom and B at the top. Horizontal edges follow
/// the canonical orientation; without one they are drawn dashed and undirected.
pub fn taiko_dot(p: &Subpartition) -> String {
    let grid = p.grid();
    let sk = OrientedSkeleton::from_cells(p.cells());
    let mut out = String::from("digraph taiko {\n  rankdir=BT;\n  node [shape=circle];\n");
    let rank = |prefix: &str, count, pos: &str| {
        let names: Vec<String> = (1..=count).map(|i| format!("{prefix}{i}")).collect();
        format!("  {{ rank={pos}; {}; }}\n", names.join("; "))
    };
    out.push_str(&rank("a", grid.m, "min"));
    out.push_str(&rank("b", grid.n, "max"));
    for e in p.covered_edges() {
        let _ = writeln!(out, "  a{} -> b{} [dir=none, color=gray40];", e.a, e.b);
    }
    let ids = sk.color_ids();
    match sk.directed_edges() {
        Ok(edges) => {
            for d in edges {
                let c = d.color;
                let _ = writeln!(out, "  {} -> {} [color=\"{}\", label=\"c{}\"];", d.tail, d.head, color(c), c + 1);
            }
        }
        Err(_) => {
            for (i, e) in sk.edges().iter().enumerate() {
                let (x, y) = e.endpoints();
                let c = ids[i];
                let _ = writeln!(out, "  {x} -> {y} [dir=none, style=dashed, color=\"{}\", label=\"c{}\"];", color(c), c + 1);
            }
        }
    }
    out.push_str("}\n");
    out
}

/// `L_1` as an undirected graph; middle vertices are named `c<i>_in` and
/// `c<i>_out` and drawn as boxes in their class color.
pub fn midlink_dot(p: &Subpartition) -> Result<String, HorizontalError> {
    let sk = OrientedSkeleton::from_cells(p.cells());
    let link = MiddleLink::build(&sk, p.grid())?;
    let g = link.graph();
    let mut out = String::from("graph midlink {\n");
    for id in 0..g.vertex_count() {
        let v = link.vertex(id);
        match v {
            LinkVertex::Side(_) => {
                let _ = writeln!(out, "  {} [shape=circle];", v);
            }
            LinkVertex::Middle(c, _) => {
                let _ = writeln!(out, "  {} [shape=box, color=\"{}\"];", v, color(c));
            }
        }
    }
    for (x, y) in g.edges() {
        let _ = writeln!(out, "  {} -- {};", link.vertex(x), link.vertex(y));
    }
    out.push_str("}\n");
    Ok(out)
}
