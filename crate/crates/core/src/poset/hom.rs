//! Homomorphism search between posets with boxes.
//!
//! A homomorphism `source → target` is a label-preserving bijection that maps
//! the order into the order and boxes onto boxes. `P ⊑ Q` holds when there
//! is a homomorphism `Q → P`.

use serde::Serialize;

use super::{EventId, EventSet, Poset};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum HomMode {
    Any,
    OrderReflecting,
    BoxReflecting,
    /// Order- and box-reflecting.
    Iso,
}

impl HomMode {
    pub fn reflects_order(self) -> bool {
        matches!(self, HomMode::OrderReflecting | HomMode::Iso)
    }

    pub fn reflects_boxes(self) -> bool {
        matches!(self, HomMode::BoxReflecting | HomMode::Iso)
    }
}

/// `Pruned` is the production search. `Reference` enumerates every
/// label-respecting bijection and checks it at the leaves; it is kept for
/// differential testing of the pruning rules.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SearchStrategy {
    #[default]
    Pruned,
    Reference,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Morphism {
    /// `map[i]` is the image of source event `i`.
    pub map: Vec<EventId>,
    pub order_reflecting: bool,
    pub box_reflecting: bool,
}

impl Morphism {
    pub fn image(&self, e: usize) -> usize {
        self.map[e].0
    }

    pub fn is_iso(&self) -> bool {
        self.order_reflecting && self.box_reflecting
    }

    fn raw(&self) -> Vec<usize> {
        self.map.iter().map(|e| e.0).collect()
    }

    /// Re-checks this morphism against the two posets.
    pub fn verify(&self, source: &Poset, target: &Poset, mode: HomMode) -> bool {
        check_map(source, target, &self.raw(), mode)
    }
}

/// Direct check that `map` is a homomorphism of the requested mode.
pub fn check_map(source: &Poset, target: &Poset, map: &[usize], mode: HomMode) -> bool {
    let n = source.len();
    if target.len() != n || map.len() != n {
        return false;
    }
    let mut seen = EventSet::EMPTY;
    for (i, &j) in map.iter().enumerate() {
        if j >= n || seen.contains(j) || source.label(i) != target.label(j) {
            return false;
        }
        seen = seen.with(j);
    }
    for (a, b) in source.order_pairs() {
        if !target.lt(map[a], map[b]) {
            return false;
        }
    }
    if mode.reflects_order() {
        for a in 0..n {
            for b in 0..n {
                if target.lt(map[a], map[b]) && !source.lt(a, b) {
                    return false;
                }
            }
        }
    }
    let images: Vec<EventSet> = source.boxes().iter().map(|b| b.map(map)).collect();
    if !images.iter().all(|&b| target.has_box(b)) {
        return false;
    }
    if mode.reflects_boxes() && images.len() != target.boxes().len() {
        return false;
    }
    true
}

pub fn find_homomorphism(source: &Poset, target: &Poset, mode: HomMode) -> Option<Morphism> {
    find_homomorphism_with(source, target, mode, SearchStrategy::Pruned)
}

pub fn find_homomorphism_with(
    source: &Poset,
    target: &Poset,
    mode: HomMode,
    strategy: SearchStrategy,
) -> Option<Morphism> {
    let n = source.len();
    if target.len() != n {
        return None;
    }
    let map = match strategy {
        SearchStrategy::Pruned => Search::new(source, target, mode)?.run()?,
        SearchStrategy::Reference => reference_search(source, target, mode)?,
    };
    debug_assert!(check_map(source, target, &map, mode));
    Some(Morphism {
        order_reflecting: source.order_size() == target.order_size(),
        box_reflecting: source.boxes().len() == target.boxes().len(),
        map: map.into_iter().map(EventId).collect(),
    })
}

/// `p ≅ q`.
pub fn iso(p: &Poset, q: &Poset) -> bool {
    find_homomorphism(p, q, HomMode::Iso).is_some()
}

/// `p ⊑ q`: `p` has at least the order and boxes of `q`.
pub fn subsumed_by(p: &Poset, q: &Poset) -> bool {
    find_homomorphism(q, p, HomMode::Any).is_some()
}

/// Splits `p ⊑ q` into a box-reflecting and an order-reflecting step, both
/// ways round. Returns `(r1, r2)` with `p ⊑° r1 ⊑ᵇ q` and `p ⊑ᵇ r2 ⊑° q`, where
/// `⊑ᵇ` is witnessed by an order-reflecting and `⊑°` by a box-reflecting
/// homomorphism.
pub fn factorize_subsumption(p: &Poset, q: &Poset) -> Option<(Poset, Poset)> {
    let phi = find_homomorphism(q, p, HomMode::Any)?;
    let map = phi.raw();
    let mut inverse = vec![0; map.len()];
    for (i, &j) in map.iter().enumerate() {
        inverse[j] = i;
    }
    // r1: q's events and order, with p's boxes pulled back along phi
    let pulled = p.boxes().iter().map(|b| b.map(&inverse)).collect();
    let r1 = q.with_structure(q.succ.clone(), pulled);
    // r2: p's events and order, with q's boxes pushed forward
    let pushed = q.boxes().iter().map(|b| b.map(&map)).collect();
    let r2 = p.with_structure(p.succ.clone(), pushed);
    Some((r1, r2))
}

struct Search<'a> {
    source: &'a Poset,
    target: &'a Poset,
    mode: HomMode,
    /// Source events in assignment order.
    order: Vec<usize>,
    candidates: Vec<Vec<usize>>,
    /// Source boxes whose last member is assigned at each position.
    boxes_done_at: Vec<Vec<EventSet>>,
    map: Vec<usize>,
    used: EventSet,
    assigned: EventSet,
}

impl<'a> Search<'a> {
    fn new(source: &'a Poset, target: &'a Poset, mode: HomMode) -> Option<Search<'a>> {
        let n = source.len();
        let (so, to) = (source.order_size(), target.order_size());
        let (sb, tb) = (source.boxes().len(), target.boxes().len());
        if so > to || sb > tb {
            return None;
        }
        if (mode.reflects_order() && so != to) || (mode.reflects_boxes() && sb != tb) {
            return None;
        }
        let mut sl: Vec<_> = source.labels().iter().collect();
        let mut tl: Vec<_> = target.labels().iter().collect();
        sl.sort();
        tl.sort();
        if sl != tl {
            return None;
        }

        let mut candidates = Vec::with_capacity(n);
        for e in 0..n {
            let (out_s, in_s, box_s) = (
                source.successors(e).len(),
                source.predecessors(e).len(),
                source.box_count(e),
            );
            let c: Vec<usize> = (0..n)
                .filter(|&f| {
                    if source.label(e) != target.label(f) {
                        return false;
                    }
                    let (out_t, in_t, box_t) = (
                        target.successors(f).len(),
                        target.predecessors(f).len(),
                        target.box_count(f),
                    );
                    let order_ok = if mode.reflects_order() {
                        out_s == out_t && in_s == in_t
                    } else {
                        out_s <= out_t && in_s <= in_t
                    };
                    let box_ok = if mode.reflects_boxes() {
                        box_s == box_t
                    } else {
                        box_s <= box_t
                    };
                    order_ok && box_ok
                })
                .collect();
            if c.is_empty() {
                return None;
            }
            candidates.push(c);
        }

        // Most constrained first, then prefer events related to already
        // chosen ones so that order checks fire early.
        let mut order = Vec::with_capacity(n);
        let mut placed = EventSet::EMPTY;
        for _ in 0..n {
            let next = (0..n)
                .filter(|&e| !placed.contains(e))
                .min_by_key(|&e| {
                    let links = source
                        .successors(e)
                        .union(source.predecessors(e))
                        .intersection(placed)
                        .len();
                    (candidates[e].len(), usize::MAX - links, e)
                })
                .expect("unplaced event");
            placed = placed.with(next);
            order.push(next);
        }

        let mut position = vec![0; n];
        for (k, &e) in order.iter().enumerate() {
            position[e] = k;
        }
        let mut boxes_done_at = vec![Vec::new(); n];
        for &b in source.boxes() {
            let last = b.iter().map(|e| position[e]).max().expect("non-empty box");
            boxes_done_at[last].push(b);
        }

        Some(Search {
            source,
            target,
            mode,
            order,
            candidates,
            boxes_done_at,
            map: vec![usize::MAX; n],
            used: EventSet::EMPTY,
            assigned: EventSet::EMPTY,
        })
    }

    fn run(mut self) -> Option<Vec<usize>> {
        if self.step(0) {
            Some(self.map)
        } else {
            None
        }
    }

    fn consistent(&self, e: usize, f: usize) -> bool {
        let (s, t) = (self.source, self.target);
        let below = s.predecessors(e).intersection(self.assigned);
        let above = s.successors(e).intersection(self.assigned);
        if !below.map(&self.map).is_subset(t.predecessors(f))
            || !above.map(&self.map).is_subset(t.successors(f))
        {
            return false;
        }
        if self.mode.reflects_order() {
            let img_assigned = self.assigned.map(&self.map);
            let t_below = t.predecessors(f).intersection(img_assigned);
            let t_above = t.successors(f).intersection(img_assigned);
            if t_below.len() != below.len() || t_above.len() != above.len() {
                return false;
            }
        }
        true
    }

    fn step(&mut self, k: usize) -> bool {
        if k == self.order.len() {
            return true;
        }
        let e = self.order[k];
        for idx in 0..self.candidates[e].len() {
            let f = self.candidates[e][idx];
            if self.used.contains(f) || !self.consistent(e, f) {
                continue;
            }
            self.map[e] = f;
            self.used = self.used.with(f);
            self.assigned = self.assigned.with(e);
            let boxes_ok = self.boxes_done_at[k]
                .iter()
                .all(|b| self.target.has_box(b.map(&self.map)));
            if boxes_ok && self.step(k + 1) {
                return true;
            }
            self.map[e] = usize::MAX;
            self.used = self.used.without(f);
            self.assigned = self.assigned.without(e);
        }
        false
    }
}

fn reference_search(source: &Poset, target: &Poset, mode: HomMode) -> Option<Vec<usize>> {
    fn go(
        e: usize,
        source: &Poset,
        target: &Poset,
        mode: HomMode,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let n = source.len();
        if e == n {
            return check_map(source, target, map, mode);
        }
        for f in 0..n {
            if used[f] || source.label(e) != target.label(f) {
                continue;
            }
            used[f] = true;
            map.push(f);
            if go(e + 1, source, target, mode, map, used) {
                return true;
            }
            map.pop();
            used[f] = false;
        }
        false
    }
    let mut map = Vec::with_capacity(source.len());
    let mut used = vec![false; source.len()];
    go(0, source, target, mode, &mut map, &mut used).then_some(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Poset {
        Poset::atom("a")
    }
    fn b() -> Poset {
        Poset::atom("b")
    }

    #[test]
    fn seq_below_par() {
        let par = a().par(&b());
        let seq = a().seq(&b());
        assert!(find_homomorphism(&par, &seq, HomMode::Any).is_some());
        assert!(subsumed_by(&seq, &par));
        assert!(!subsumed_by(&par, &seq));
    }

    #[test]
    fn boxed_below_unboxed() {
        let seq = a().seq(&b());
        let boxed = seq.boxed();
        let m = find_homomorphism(&seq, &boxed, HomMode::Any).unwrap();
        assert!(m.order_reflecting && !m.box_reflecting);
        assert!(subsumed_by(&boxed, &seq));
        assert!(find_homomorphism(&seq, &boxed, HomMode::BoxReflecting).is_none());
    }

    #[test]
    fn boxed_pair_does_not_map_into_interleaving() {
        // print;([rx;wx] | [ry;wy]);print versus the interleaved run
        let p = || Poset::atom("print");
        let chain = |x: &str, y: &str| Poset::atom(x).seq(&Poset::atom(y));
        let boxed = p()
            .seq(&chain("rx", "wx").boxed().par(&chain("ry", "wy").boxed()))
            .seq(&p());
        let run = ["print", "rx", "ry", "wx", "wy", "print"]
            .iter()
            .map(|l| Poset::atom(*l))
            .reduce(|x, y| x.seq(&y))
            .unwrap();
        assert!(find_homomorphism(&boxed, &run, HomMode::Any).is_none());
        assert!(find_homomorphism(&boxed.unboxed_all(), &run, HomMode::Any).is_some());
    }

    impl Poset {
        fn unboxed_all(&self) -> Poset {
            self.with_structure(self.succ.clone(), Vec::new())
        }
    }

    #[test]
    fn par_commutes() {
        assert!(iso(&a().par(&b()), &b().par(&a())));
        assert!(!iso(&a().seq(&b()), &b().seq(&a())));
    }

    #[test]
    fn exchange_law() {
        let (c, d) = (Poset::atom("c"), Poset::atom("d"));
        let lhs = a().par(&b()).seq(&c.par(&d));
        let rhs = a().seq(&c).par(&b().seq(&d));
        assert!(subsumed_by(&lhs, &rhs));
        assert!(!subsumed_by(&rhs, &lhs));
    }

    #[test]
    fn unit_subsumption() {
        let u = Poset::unit();
        assert!(subsumed_by(&u, &u) && iso(&u, &u));
        assert!(!subsumed_by(&a(), &u));
        assert!(!subsumed_by(&u, &a()));
    }

    #[test]
    fn factorization_examples() {
        let p = a().seq(&b()).boxed();
        let q = a().par(&b());
        let (r1, r2) = factorize_subsumption(&p, &q).unwrap();
        assert!(iso(&r1, &q.boxed()));
        assert!(iso(&r2, &a().seq(&b())));
        assert!(find_homomorphism(&r1, &p, HomMode::BoxReflecting).is_some());
        assert!(find_homomorphism(&q, &r1, HomMode::OrderReflecting).is_some());
        assert!(find_homomorphism(&r2, &p, HomMode::OrderReflecting).is_some());
        assert!(find_homomorphism(&q, &r2, HomMode::BoxReflecting).is_some());

        let (r1, r2) = factorize_subsumption(&p, &p).unwrap();
        assert!(iso(&r1, &p) && iso(&r2, &p));

        assert!(factorize_subsumption(&a().seq(&b()), &b().seq(&a())).is_none());
    }

    #[test]
    fn reference_agrees_on_small_cases() {
        let samples = [
            a().par(&b()),
            a().seq(&b()),
            a().seq(&b()).boxed(),
            a().par(&a()).seq(&a()),
            a().seq(&a()).par(&a()),
            a().par(&a().boxed()).seq(&a()),
        ];
        for s in &samples {
            for t in &samples {
                for mode in [
                    HomMode::Any,
                    HomMode::OrderReflecting,
                    HomMode::BoxReflecting,
                    HomMode::Iso,
                ] {
                    let fast = find_homomorphism_with(s, t, mode, SearchStrategy::Pruned);
                    let slow = find_homomorphism_with(s, t, mode, SearchStrategy::Reference);
                    assert_eq!(fast.is_some(), slow.is_some(), "{s:?} -> {t:?} {mode:?}");
                }
            }
        }
    }
}
