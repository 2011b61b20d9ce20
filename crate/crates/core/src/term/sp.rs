//! Series-parallel recognition by forbidden patterns, and term synthesis.

use std::fmt;

use serde::Serialize;

use crate::poset::{EventId, EventSet, Poset};

use super::SpTerm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Pattern {
    /// The N shape in the order.
    P1,
    /// Two overlapping boxes, neither inside the other.
    P2,
    /// An outside event below part of a box only.
    P3,
    /// An outside event above part of a box only.
    P4,
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Evidence that a poset is not series-parallel.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatternWitness {
    pub pattern: Pattern,
    /// `e1, e2, …` in the order used by the pattern's definition.
    pub events: Vec<EventId>,
    /// `A` (and `B` for P2).
    pub boxes: Vec<EventSet>,
}

impl fmt::Display for PatternWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on events", self.pattern)?;
        for e in &self.events {
            write!(f, " {e}")?;
        }
        for b in &self.boxes {
            write!(f, " box {b}")?;
        }
        Ok(())
    }
}

impl PatternWitness {
    /// Re-evaluates the defining condition on `p`.
    pub fn validate(&self, p: &Poset) -> bool {
        let n = p.len();
        let ev: Vec<usize> = self.events.iter().map(|e| e.0).collect();
        if ev.iter().any(|&e| e >= n) || self.boxes.iter().any(|b| !p.has_box(*b)) {
            return false;
        }
        match (self.pattern, ev.as_slice(), self.boxes.as_slice()) {
            (Pattern::P1, &[e1, e2, e3, e4], []) => is_n(p, e1, e2, e3, e4),
            (Pattern::P2, &[e1, e2, e3], &[a, b]) => {
                a.contains(e1)
                    && !b.contains(e1)
                    && a.contains(e2)
                    && b.contains(e2)
                    && b.contains(e3)
                    && !a.contains(e3)
            }
            (Pattern::P3, &[e1, e2, e3], &[a]) => {
                !a.contains(e1) && a.contains(e2) && a.contains(e3) && p.le(e1, e2) && !p.le(e1, e3)
            }
            (Pattern::P4, &[e1, e2, e3], &[a]) => {
                !a.contains(e1) && a.contains(e2) && a.contains(e3) && p.le(e2, e1) && !p.le(e3, e1)
            }
            _ => false,
        }
    }
}

fn is_n(p: &Poset, e1: usize, e2: usize, e3: usize, e4: usize) -> bool {
    p.le(e1, e3) && p.le(e2, e3) && p.le(e2, e4) && !p.le(e1, e4) && !p.le(e2, e1) && !p.le(e4, e3)
}

fn witness(pattern: Pattern, events: &[usize], boxes: &[EventSet]) -> PatternWitness {
    PatternWitness {
        pattern,
        events: events.iter().map(|&e| EventId(e)).collect(),
        boxes: boxes.to_vec(),
    }
}

/// `None` when `p` is series-parallel; otherwise the first forbidden pattern
/// found, scanning P1 to P4 and ids (events, then boxes in ascending order)
/// lexicographically.
pub fn sp_check(p: &Poset) -> Option<PatternWitness> {
    let n = p.len();
    for e1 in 0..n {
        for e2 in 0..n {
            if p.le(e2, e1) {
                continue;
            }
            for e3 in 0..n {
                if !p.le(e1, e3) || !p.le(e2, e3) {
                    continue;
                }
                for e4 in 0..n {
                    if is_n(p, e1, e2, e3, e4) {
                        return Some(witness(Pattern::P1, &[e1, e2, e3, e4], &[]));
                    }
                }
            }
        }
    }
    let boxes = p.boxes();
    for &a in boxes {
        for &b in boxes {
            let (only_a, both, only_b) = (a.difference(b), a.intersection(b), b.difference(a));
            if let (Some(e1), Some(e2), Some(e3)) = (only_a.first(), both.first(), only_b.first()) {
                return Some(witness(Pattern::P2, &[e1, e2, e3], &[a, b]));
            }
        }
    }
    for &a in boxes {
        for e1 in a.complement(n).iter() {
            let below = a.intersection(p.successors(e1));
            let missed = a.difference(p.successors(e1));
            if let (Some(e2), Some(e3)) = (below.first(), missed.first()) {
                return Some(witness(Pattern::P3, &[e1, e2, e3], &[a]));
            }
        }
    }
    for &a in boxes {
        for e1 in a.complement(n).iter() {
            let above = a.intersection(p.predecessors(e1));
            let missed = a.difference(p.predecessors(e1));
            if let (Some(e2), Some(e3)) = (above.first(), missed.first()) {
                return Some(witness(Pattern::P4, &[e1, e2, e3], &[a]));
            }
        }
    }
    None
}

/// Lexicographic comparison of sets as ascending id sequences.
fn lex_key(s: EventSet) -> Vec<usize> {
    s.iter().collect()
}

/// The smallest non-trivial nested prefix set, if any. Prefix sets form a
/// chain, and the one of size `k` can only be the set of events with fewer
/// than `k` predecessors.
fn nested_prefix(p: &Poset) -> Option<EventSet> {
    let n = p.len();
    (1..n)
        .map(|k| {
            (0..n)
                .filter(|&e| p.predecessors(e).len() < k)
                .collect::<EventSet>()
        })
        .find(|&a| {
            let k = a.len();
            k > 0 && k < n && p.is_prefix(a) && p.is_nested(a)
        })
}

/// The smallest non-trivial nested isolated set, if any. Such sets are the
/// unions of classes of the equivalence generated by comparability and
/// shared boxes, so the smallest is the smallest class.
fn nested_isolated(p: &Poset) -> Option<EventSet> {
    let n = p.len();
    let mut classes: Vec<EventSet> = Vec::new();
    let mut seen = EventSet::EMPTY;
    for e in 0..n {
        if seen.contains(e) {
            continue;
        }
        let mut class = EventSet::singleton(e);
        loop {
            let mut grown = class;
            for f in class.iter() {
                grown = grown.union(p.successors(f)).union(p.predecessors(f));
            }
            for &b in p.boxes() {
                if b.intersects(grown) {
                    grown = grown.union(b);
                }
            }
            if grown == class {
                break;
            }
            class = grown;
        }
        seen = seen.union(class);
        classes.push(class);
    }
    if classes.len() < 2 {
        return None;
    }
    classes.into_iter().min_by_key(|&c| (c.len(), lex_key(c)))
}

/// A term whose poset is isomorphic to `p`, or `None` when `p` contains a
/// forbidden pattern.
pub fn synthesize_term(p: &Poset) -> Option<SpTerm> {
    if sp_check(p).is_some() {
        return None;
    }
    let t = synth(p);
    debug_assert!(t.is_some(), "pattern-free poset without a split: {p:?}");
    t
}

fn synth(p: &Poset) -> Option<SpTerm> {
    match p.len() {
        0 => return Some(SpTerm::One),
        1 => {
            let a = SpTerm::Atom(p.label(0).clone());
            return Some(if p.boxes().is_empty() { a } else { a.boxed() });
        }
        _ => {}
    }
    if p.has_full_box() {
        return synth(&p.unboxed()).map(SpTerm::boxed);
    }
    let n = p.len();
    if let Some(a) = nested_prefix(p) {
        let left = synth(&p.restrict(a).ok()?)?;
        let right = synth(&p.restrict(a.complement(n)).ok()?)?;
        return Some(left.seq(right));
    }
    if let Some(a) = nested_isolated(p) {
        let left = synth(&p.restrict(a).ok()?)?;
        let right = synth(&p.restrict(a.complement(n)).ok()?)?;
        return Some(left.par(right));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::super::{interp_sp, parse_sp_term};
    use super::*;
    use crate::poset::{iso, Label};

    fn labels(names: &[&str]) -> Vec<Label> {
        names.iter().map(|&l| Label::from(l)).collect()
    }

    fn n_poset() -> Poset {
        Poset::from_parts(labels(&["a", "b", "c", "d"]), [(0, 2), (1, 2), (1, 3)], []).unwrap()
    }

    #[test]
    fn read_write_conflict_is_series_parallel() {
        let p = Poset::from_parts(
            labels(&["rx", "ry", "wx", "wy"]),
            [(0, 2), (0, 3), (1, 2), (1, 3)],
            [],
        )
        .unwrap();
        assert_eq!(sp_check(&p), None);
        let t = synthesize_term(&p).unwrap();
        assert!(iso(&interp_sp(&t), &p));
    }

    #[test]
    fn n_shape() {
        let p = n_poset();
        let w = sp_check(&p).unwrap();
        assert_eq!(w.pattern, Pattern::P1);
        assert_eq!(w.events, [0, 1, 2, 3].map(EventId).to_vec());
        assert!(w.validate(&p));
        assert_eq!(synthesize_term(&p), None);
    }

    #[test]
    fn overlapping_boxes() {
        let p = Poset::from_parts(
            labels(&["a", "b", "c"]),
            [],
            [EventSet::from_events([0, 1]), EventSet::from_events([1, 2])],
        )
        .unwrap();
        let w = sp_check(&p).unwrap();
        assert_eq!(w.pattern, Pattern::P2);
        assert!(w.validate(&p));
    }

    #[test]
    fn boxes_cut_by_order() {
        // a < b only, box {b, c}
        let p = Poset::from_parts(
            labels(&["a", "b", "c"]),
            [(0, 1)],
            [EventSet::from_events([1, 2])],
        )
        .unwrap();
        let w = sp_check(&p).unwrap();
        assert_eq!(w.pattern, Pattern::P3);
        assert!(w.validate(&p));
        let q = Poset::from_parts(
            labels(&["a", "b", "c"]),
            [(1, 0)],
            [EventSet::from_events([1, 2])],
        )
        .unwrap();
        let w = sp_check(&q).unwrap();
        assert_eq!(w.pattern, Pattern::P4);
        assert!(w.validate(&q));
        assert!(!w.validate(&p));
    }

    #[test]
    fn synthesis_round_trips() {
        for s in [
            "1",
            "a",
            "[a]",
            "a;b;c",
            "[a;b]|c",
            "[[a]|[b]];c",
            "print;([rx;ix;wx]|[ry;iy;wy]);print",
            "(a|b);(c|d)",
            "a;[b|c;[d]];e|f",
        ] {
            let p = interp_sp(&parse_sp_term(s).unwrap());
            assert_eq!(sp_check(&p), None, "{s}");
            let t = synthesize_term(&p).unwrap();
            assert!(iso(&interp_sp(&t), &p), "{s} gave {t}");
        }
        assert_eq!(synthesize_term(&Poset::unit()), Some(SpTerm::One));
    }

    /// Brute force over all subsets, ascending by size then lexicographically.
    fn first_subset(p: &Poset, ok: impl Fn(EventSet) -> bool) -> Option<EventSet> {
        let n = p.len();
        let mut all: Vec<EventSet> = (1u64..(1 << n) - 1).map(EventSet).collect();
        all.sort_by_key(|&s| (s.len(), lex_key(s)));
        all.into_iter().find(|&s| ok(s))
    }

    #[test]
    fn split_finders_match_brute_force() {
        for s in [
            "a;b;c",
            "[a;b];c;d",
            "a|b|[c;d]",
            "(a|[b|c]);d",
            "[a|b]|c;d|e",
            "a;(b|c);[d]",
        ] {
            let p = interp_sp(&parse_sp_term(s).unwrap());
            let p = p.unboxed();
            assert_eq!(
                nested_prefix(&p),
                first_subset(&p, |a| p.is_prefix(a) && p.is_nested(a)),
                "{s}"
            );
            assert_eq!(
                nested_isolated(&p),
                first_subset(&p, |a| p.is_isolated(a) && p.is_nested(a)),
                "{s}"
            );
        }
    }
}
