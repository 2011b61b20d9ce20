//! Exhaustive enumeration of weaker and stronger posets on the same events.
//!
//! Every function here is exponential and meant for small posets only.

use std::collections::HashSet;

use super::{transitive_close, EventSet, Poset};

/// Transitively closed sub-orders of `p`'s order.
fn sub_orders(p: &Poset) -> Vec<Vec<EventSet>> {
    let pairs: Vec<(usize, usize)> = p.order_pairs().collect();
    assert!(pairs.len() < 28, "too many order pairs to enumerate");
    let n = p.len();
    let mut out = Vec::new();
    for mask in 0u64..1 << pairs.len() {
        let mut succ = vec![EventSet::EMPTY; n];
        for (k, &(a, b)) in pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                succ[a] = succ[a].with(b);
            }
        }
        let closed = (0..n).all(|i| succ[i].iter().all(|j| succ[j].is_subset(succ[i])));
        if closed {
            out.push(succ);
        }
    }
    out
}

fn box_subsets(boxes: &[EventSet]) -> Vec<Vec<EventSet>> {
    assert!(boxes.len() < 24, "too many boxes to enumerate");
    (0u64..1 << boxes.len())
        .map(|mask| {
            boxes
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, b)| *b)
                .collect()
        })
        .collect()
}

/// Every `q` on the same events with `p ⊑ q` via the identity: a closed
/// subset of the order together with a subset of the boxes.
pub fn weakenings(p: &Poset) -> Vec<Poset> {
    let boxes = box_subsets(p.boxes());
    let mut out = Vec::new();
    for succ in sub_orders(p) {
        for bs in &boxes {
            out.push(p.with_structure(succ.clone(), bs.clone()));
        }
    }
    out
}

/// Like [`weakenings`] but keeping the order fixed.
pub fn box_weakenings(p: &Poset) -> Vec<Poset> {
    box_subsets(p.boxes())
        .into_iter()
        .map(|bs| p.with_structure(p.succ.clone(), bs))
        .collect()
}

/// Strict orders on `0..n` containing `p`'s order.
fn super_orders(p: &Poset) -> Vec<Vec<EventSet>> {
    let n = p.len();
    let free: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| a != b && !p.lt(a, b) && !p.lt(b, a))
        .collect();
    assert!(free.len() < 24, "too many incomparable pairs to enumerate");
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u64..1 << free.len() {
        let mut succ = p.succ.clone();
        for (k, &(a, b)) in free.iter().enumerate() {
            if mask >> k & 1 == 1 {
                succ[a] = succ[a].with(b);
            }
        }
        transitive_close(&mut succ);
        if (0..n).any(|i| succ[i].contains(i)) {
            continue;
        }
        if seen.insert(succ.clone()) {
            out.push(succ);
        }
    }
    out
}

/// Every `q` on the same events with `q ⊑ p` via the identity, adding at most
/// `extra_boxes` new boxes to `p`'s.
pub fn strengthenings(p: &Poset, extra_boxes: usize) -> Vec<Poset> {
    let n = p.len();
    let fresh: Vec<EventSet> = (1u64..1 << n).map(EventSet).filter(|b| !p.has_box(*b)).collect();
    let mut box_sets: Vec<Vec<EventSet>> = vec![Vec::new()];
    let mut frontier: Vec<(usize, Vec<EventSet>)> = vec![(0, Vec::new())];
    for _ in 0..extra_boxes {
        let mut next = Vec::new();
        for (start, chosen) in &frontier {
            for (k, b) in fresh.iter().enumerate().skip(*start) {
                let mut c = chosen.clone();
                c.push(*b);
                box_sets.push(c.clone());
                next.push((k + 1, c));
            }
        }
        frontier = next;
    }
    let mut out = Vec::new();
    for succ in super_orders(p) {
        for added in &box_sets {
            let mut boxes = p.boxes().to_vec();
            boxes.extend(added.iter().copied());
            out.push(p.with_structure(succ.clone(), boxes));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::subsumed_by;
    use super::*;

    fn abc() -> Poset {
        let (a, b, c) = (Poset::atom("a"), Poset::atom("b"), Poset::atom("c"));
        a.seq(&b).boxed().par(&c)
    }

    #[test]
    fn weakenings_are_weaker() {
        let p = abc();
        let ws = weakenings(&p);
        // orders {∅, a<b} × boxes {∅, [ab]}
        assert_eq!(ws.len(), 4);
        assert!(ws.iter().all(|q| subsumed_by(&p, q)));
        assert_eq!(box_weakenings(&p).len(), 2);
    }

    #[test]
    fn strengthenings_are_stronger() {
        let p = abc();
        let ss = strengthenings(&p, 0);
        assert!(ss.iter().all(|q| subsumed_by(q, &p)));
        // linear extensions: c before, between or after a<b
        let chain3 = ss.iter().filter(|q| q.order_size() == 3).count();
        assert_eq!(chain3, 3);
        let with_box = strengthenings(&p, 1);
        assert_eq!(with_box.len(), ss.len() * (1 + 6));
    }

    #[test]
    fn sub_orders_of_chain() {
        let (a, b, c) = (Poset::atom("a"), Poset::atom("b"), Poset::atom("c"));
        let chain = a.seq(&b).seq(&c);
        // closed subsets of a 3-chain: ∅, {ab}, {bc}, {ac}, {ab,ac}, {ac,bc}, all
        assert_eq!(weakenings(&chain).len(), 7);
    }
}
