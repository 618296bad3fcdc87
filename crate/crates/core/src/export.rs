//! Newick output. Branch lengths are decimal floats; exact values ride along
//! in `[&key=value]` comments.

use std::fmt::Write;

use crate::graph::quote;
use crate::rational::{fmt_float, fmt_q};
use crate::ultrametric::{Depth, RootedTree, XTree};

fn label(s: Option<&str>) -> String {
    match s {
        None => String::new(),
        Some(s) if s.chars().any(|c| "()[]':;, \t\n".contains(c)) => format!("'{}'", s.replace('\'', "''")),
        Some(s) => s.to_string(),
    }
}

/// Newick string of a rooted tree. With depths, each vertex carries
/// `[&depth=...]` and each edge the difference of the distances it spans.
pub fn newick(t: &RootedTree) -> String {
    fn go(t: &RootedTree, v: usize, out: &mut String) {
        let kids = t.children(v);
        if !kids.is_empty() {
            out.push('(');
            for (i, &c) in kids.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                go(t, c, out);
            }
            out.push(')');
        }
        out.push_str(&label(t.label(v)));
        if let Some(d) = &t.node(v).depth {
            out.push_str(&format!("[&depth={d}]"));
            let parent = t.node(v).parent.and_then(|p| t.node(p).depth.as_ref());
            if let (Depth::Finite(c), Some(Depth::Finite(p))) = (d, parent) {
                let law = t.law();
                out.push_str(&format!(
                    ":{}",
                    fmt_float(law.value_as_distance(p) - law.value_as_distance(c))
                ));
            }
        }
    }
    let mut out = String::new();
    go(t, t.root(), &mut out);
    out.push(';');
    out
}

/// Newick string of an X-tree rooted at its first marked vertex, with
/// `[&doubled=...]` carrying each exact doubled edge length.
pub fn xtree_newick(x: &XTree) -> String {
    fn go(x: &XTree, v: usize, from: Option<usize>, out: &mut String) {
        let mut kids: Vec<usize> = x
            .tree()
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| Some(w) != from)
            .collect();
        kids.sort_unstable();
        if !kids.is_empty() {
            out.push('(');
            for (i, &c) in kids.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                go(x, c, Some(v), out);
            }
            out.push(')');
        }
        out.push_str(&label(x.tree().label(v)));
        if let Some(p) = from {
            out.push_str(&format!(
                "[&doubled={}]:{}",
                fmt_q(x.doubled_length(p, v)),
                fmt_float(x.display_length(p, v))
            ));
        }
    }
    let mut out = String::new();
    if let Some(&first) = x.marked().first() {
        go(x, first, None, &mut out);
    }
    out.push(';');
    out
}

/// Graphviz rendering of an X-tree; unmarked vertices are drawn as points.
pub fn xtree_dot(x: &XTree) -> String {
    let mut out = String::from("graph X {\n");
    for v in 0..x.tree().len() {
        match x.tree().label(v) {
            Some(_) => writeln!(out, "  {};", quote(&x.node_name(v))),
            None => writeln!(out, "  {} [shape=point];", quote(&x.node_name(v))),
        }
        .unwrap();
    }
    for (a, b, len) in x.edges() {
        writeln!(
            out,
            "  {} -- {} [label=\"{}\"];",
            quote(&x.node_name(a)),
            quote(&x.node_name(b)),
            fmt_q(&len)
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}
