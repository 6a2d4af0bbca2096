//! Graphviz export. Edges run parent -> child; vertex 0 is filled and each
//! pair of trees sits in a dashed cluster.

use std::fmt::Write;

use forestcount::{PprForest, RootedForest, UnrootedForest, Vertex};

fn edges(out: &mut String, parents: impl Iterator<Item = (Vertex, Option<Vertex>)>) {
    for (v, p) in parents {
        if let Some(p) = p {
            writeln!(out, "  {p} -> {v};").unwrap();
        }
    }
}

pub fn ppr(f: &PprForest) -> String {
    let mut out = String::from("digraph ppr {\n  node [shape=circle];\n");
    let tree0: Vec<Vertex> = (0..=f.n()).filter(|&v| f.root_of(v) == 0).collect();
    out.push_str("  subgraph cluster_t0 {\n    style=solid;\n");
    out.push_str("    0 [style=filled, fillcolor=lightgray];\n");
    for v in tree0.iter().skip(1) {
        writeln!(out, "    {v};").unwrap();
    }
    out.push_str("  }\n");
    for (i, &(r, s)) in f.pairs().iter().enumerate() {
        writeln!(out, "  subgraph cluster_pair_{i} {{\n    style=dashed;").unwrap();
        for v in (1..=f.n()).filter(|&v| [r, s].contains(&f.root_of(v))) {
            writeln!(out, "    {v};").unwrap();
        }
        out.push_str("  }\n");
    }
    edges(&mut out, f.parents().iter().copied().enumerate());
    out.push_str("}\n");
    out
}

pub fn rooted(f: &RootedForest) -> String {
    let mut out = String::from("digraph rooted {\n  node [shape=circle];\n");
    for v in f.vertices() {
        writeln!(out, "  {v};").unwrap();
    }
    edges(&mut out, f.vertices().map(|v| (v, f.parent(v))));
    out.push_str("}\n");
    out
}

/// Each tree is drawn hanging from its smallest vertex.
pub fn unrooted(g: &UnrootedForest) -> String {
    let oriented = PprForest::from_unrooted(g);
    let mut out = String::from("digraph unrooted {\n  node [shape=circle];\n");
    for v in 1..=g.n() {
        writeln!(out, "  {v};").unwrap();
    }
    edges(
        &mut out,
        (1..=g.n()).map(|v| (v, oriented.parent(v).filter(|&p| p != 0))),
    );
    out.push_str("}\n");
    out
}
