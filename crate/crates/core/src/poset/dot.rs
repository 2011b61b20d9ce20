//! Graphviz export.
//!
//! Nodes are `id:label`, edges are covering pairs. Boxes that form a laminar
//! family become nested clusters; otherwise each box is drawn as a dashed note
//! node linked to its members.

use std::fmt::Write;

use super::{EventSet, Poset};

fn is_laminar(boxes: &[EventSet]) -> bool {
    boxes.iter().enumerate().all(|(i, &a)| {
        boxes[i + 1..]
            .iter()
            .all(|&b| a.is_subset(b) || b.is_subset(a) || !a.intersects(b))
    })
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn to_dot(p: &Poset, name: &str) -> String {
    let mut out = String::new();
    writeln!(out, "digraph \"{}\" {{", escape(name)).unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    writeln!(out, "  node [shape=ellipse];").unwrap();
    let boxes = p.boxes();
    if is_laminar(boxes) {
        // children of each box: maximal boxes strictly inside it
        let mut by_size: Vec<EventSet> = boxes.to_vec();
        by_size.sort_by_key(|b| std::cmp::Reverse(b.len()));
        let parent = |b: EventSet| -> Option<EventSet> {
            by_size
                .iter()
                .filter(|&&c| c != b && b.is_subset(c))
                .min_by_key(|c| c.len())
                .copied()
        };
        let mut counter = 0;
        emit_level(p, None, &by_size, &parent, 1, &mut counter, &mut out);
    } else {
        for e in 0..p.len() {
            node(p, e, 1, &mut out);
        }
        for (k, b) in boxes.iter().enumerate() {
            writeln!(out, "  box{k} [shape=note, style=dashed, label=\"box {b}\"];").unwrap();
            for e in b.iter() {
                writeln!(out, "  box{k} -> e{e} [style=dashed, arrowhead=none];").unwrap();
            }
        }
    }
    for (a, b) in p.covering_pairs() {
        writeln!(out, "  e{a} -> e{b};").unwrap();
    }
    out.push_str("}\n");
    out
}

fn node(p: &Poset, e: usize, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    writeln!(out, "{pad}e{e} [label=\"{e}:{}\"];", escape(p.label(e).as_str())).unwrap();
}

fn emit_level(
    p: &Poset,
    within: Option<EventSet>,
    boxes: &[EventSet],
    parent: &dyn Fn(EventSet) -> Option<EventSet>,
    depth: usize,
    counter: &mut usize,
    out: &mut String,
) {
    let children: Vec<EventSet> = boxes.iter().copied().filter(|&b| parent(b) == within).collect();
    let covered = children.iter().fold(EventSet::EMPTY, |s, b| s.union(*b));
    let scope = within.unwrap_or_else(|| p.events());
    for e in scope.difference(covered).iter() {
        node(p, e, depth, out);
    }
    let pad = "  ".repeat(depth);
    for b in children {
        writeln!(out, "{pad}subgraph cluster_{} {{", *counter).unwrap();
        *counter += 1;
        writeln!(out, "{pad}  style=rounded;").unwrap();
        writeln!(out, "{pad}  label=\"\";").unwrap();
        emit_level(p, Some(b), boxes, parent, depth + 1, counter, out);
        writeln!(out, "{pad}}}").unwrap();
    }
}
