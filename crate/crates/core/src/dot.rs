//! Graphviz output for the tree of a pentaform.

use std::fmt::Write;

use crate::relation::QuintupleSet;
use crate::tree::{out_tree_of, TreeError};

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' | '\\' => {
                out.push('\\');
                out.push(c);
            }
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

/// A `digraph` with one node per element of X and one edge per row,
/// labelled by its action. Decision nodes show their player and situation;
/// information sets with several nodes are drawn as dashed clusters.
pub fn export_dot(q: &QuintupleSet) -> Result<String, TreeError> {
    let tree = out_tree_of(q)?;
    let mut out = String::from("digraph pentaform {\n  node [shape=circle];\n");
    let slices = q.slice_partition();
    for (k, (j, slice)) in slices.iter().filter(|(_, s)| s.decision_nodes().len() > 1).enumerate() {
        writeln!(out, "  subgraph cluster_{k} {{").unwrap();
        writeln!(out, "    style=dashed;").unwrap();
        writeln!(out, "    label={};", quote(&j.to_string())).unwrap();
        for w in slice.decision_nodes() {
            writeln!(out, "    {};", quote(w.as_str())).unwrap();
        }
        out.push_str("  }\n");
    }
    for x in tree.nodes() {
        match q.iter().find(|r| &r.w == x) {
            Some(r) => {
                let label = format!("{x}\n{} @ {}", r.i, r.j);
                writeln!(out, "  {} [label={}];", quote(x.as_str()), quote(&label)).unwrap();
            }
            None => writeln!(out, "  {} [shape=point, xlabel={}];", quote(x.as_str()), quote(x.as_str())).unwrap(),
        }
    }
    for r in q.iter() {
        writeln!(out, "  {} -> {} [label={}];", quote(r.w.as_str()), quote(r.y.as_str()), quote(r.a.as_str())).unwrap();
    }
    out.push_str("}\n");
    Ok(out)
}
