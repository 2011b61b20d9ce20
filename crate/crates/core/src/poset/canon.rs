//! Canonical forms and iso-deduplicated poset sets.
//!
//! Colour refinement over labels, order neighbours and box membership splits
//! events into iso-invariant classes; the canonical form is then the least
//! encoding over relabellings that respect those classes.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashSet;
use std::hash::{Hash, Hasher};

use super::{Label, Poset};

fn hash_of<T: Hash>(value: &T) -> u64 {
    let mut h = DefaultHasher::new();
    value.hash(&mut h);
    h.finish()
}

/// Per-event colours after refinement has stabilised.
fn refine(p: &Poset) -> Vec<u64> {
    let n = p.len();
    let mut colours: Vec<u64> = (0..n)
        .map(|e| hash_of(&(p.label(e).as_str(), p.box_count(e))))
        .collect();
    let mut classes = distinct(&colours);
    for _ in 0..n {
        let box_sigs: Vec<Vec<u64>> = p
            .boxes()
            .iter()
            .map(|b| sorted(b.iter().map(|e| colours[e])))
            .collect();
        let next: Vec<u64> = (0..n)
            .map(|e| {
                let ups = sorted(p.successors(e).iter().map(|f| colours[f]));
                let downs = sorted(p.predecessors(e).iter().map(|f| colours[f]));
                let mut boxes: Vec<&Vec<u64>> = p
                    .boxes()
                    .iter()
                    .zip(&box_sigs)
                    .filter(|(b, _)| b.contains(e))
                    .map(|(_, s)| s)
                    .collect();
                boxes.sort();
                hash_of(&(colours[e], ups, downs, boxes))
            })
            .collect();
        colours = next;
        let refined = distinct(&colours);
        if refined == classes {
            break;
        }
        classes = refined;
    }
    colours
}

fn sorted(it: impl Iterator<Item = u64>) -> Vec<u64> {
    let mut v: Vec<u64> = it.collect();
    v.sort_unstable();
    v
}

fn distinct(colours: &[u64]) -> usize {
    let mut v = colours.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

/// Canonical form of a poset: equal keys exactly for isomorphic posets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey {
    labels: Vec<Label>,
    /// Row `k`: which earlier positions lie below, and which above, position `k`.
    rows: Vec<(u64, u64)>,
    boxes: Vec<u64>,
}

/// Lexicographically least encoding over all relabellings that respect the
/// refined colour classes. Twin events (same label, neighbours and boxes) are
/// kept in id order, which removes the factorial blow-up for parallel copies.
pub fn canonical_key(p: &Poset) -> CanonicalKey {
    let n = p.len();
    let colours = refine(p);
    let mut classes: Vec<u64> = colours.clone();
    classes.sort_unstable();
    // slot k may hold any event whose colour equals classes[k]
    let mut twin_before = vec![None; n];
    for e in 0..n {
        twin_before[e] = (0..e).rev().find(|&f| {
            colours[f] == colours[e]
                && p.label(f) == p.label(e)
                && p.successors(f) == p.successors(e)
                && p.predecessors(f) == p.predecessors(e)
                && p.boxes().iter().all(|b| b.contains(f) == b.contains(e))
        });
    }
    let mut search = CanonSearch {
        p,
        colours: &colours,
        classes: &classes,
        twin_before: &twin_before,
        slots: Vec::with_capacity(n),
        position: vec![usize::MAX; n],
        rows: Vec::with_capacity(n),
        best: None,
    };
    search.go(false);
    let (rows, boxes, slots) = search.best.expect("at least one relabelling");
    CanonicalKey {
        labels: slots.iter().map(|&e| p.label(e).clone()).collect(),
        rows,
        boxes,
    }
}

type Encoding = (Vec<(u64, u64)>, Vec<u64>, Vec<usize>);

struct CanonSearch<'a> {
    p: &'a Poset,
    colours: &'a [u64],
    classes: &'a [u64],
    twin_before: &'a [Option<usize>],
    slots: Vec<usize>,
    position: Vec<usize>,
    rows: Vec<(u64, u64)>,
    best: Option<Encoding>,
}

impl CanonSearch<'_> {
    /// `strictly_smaller`: the current prefix already beats the best one.
    fn go(&mut self, strictly_smaller: bool) {
        let k = self.slots.len();
        let n = self.p.len();
        if k == n {
            let mut boxes: Vec<u64> = self.p.boxes().iter().map(|b| b.map(&self.position).0).collect();
            boxes.sort_unstable();
            let better = match &self.best {
                None => true,
                Some((_, best_boxes, _)) => strictly_smaller || boxes < *best_boxes,
            };
            if better {
                self.best = Some((self.rows.clone(), boxes, self.slots.clone()));
            }
            return;
        }
        for e in 0..n {
            if self.position[e] != usize::MAX || self.colours[e] != self.classes[k] {
                continue;
            }
            if let Some(t) = self.twin_before[e] {
                if self.position[t] == usize::MAX {
                    continue;
                }
            }
            let mut below = 0u64;
            let mut above = 0u64;
            for (j, &f) in self.slots.iter().enumerate() {
                if self.p.lt(f, e) {
                    below |= 1 << j;
                }
                if self.p.lt(e, f) {
                    above |= 1 << j;
                }
            }
            let row = (below, above);
            let now_smaller = if strictly_smaller {
                true
            } else if let Some((best_rows, _, _)) = &self.best {
                match row.cmp(&best_rows[k]) {
                    std::cmp::Ordering::Greater => continue,
                    std::cmp::Ordering::Less => true,
                    std::cmp::Ordering::Equal => false,
                }
            } else {
                false
            };
            self.position[e] = k;
            self.slots.push(e);
            self.rows.push(row);
            self.go(now_smaller);
            self.rows.pop();
            self.slots.pop();
            self.position[e] = usize::MAX;
        }
    }
}

/// A set of posets modulo isomorphism, in insertion order.
#[derive(Clone, Debug, Default)]
pub struct PosetSet {
    items: Vec<Poset>,
    keys: HashSet<CanonicalKey>,
}

impl PosetSet {
    pub fn new() -> PosetSet {
        PosetSet::default()
    }

    /// Inserts `p` unless an isomorphic poset is already present. Returns
    /// whether it was inserted.
    pub fn insert(&mut self, p: Poset) -> bool {
        if !self.keys.insert(canonical_key(&p)) {
            return false;
        }
        self.items.push(p);
        true
    }

    pub fn contains(&self, p: &Poset) -> bool {
        self.keys.contains(&canonical_key(p))
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Poset> {
        self.items.iter()
    }

    pub fn into_vec(self) -> Vec<Poset> {
        self.items
    }
}

impl FromIterator<Poset> for PosetSet {
    fn from_iter<I: IntoIterator<Item = Poset>>(iter: I) -> Self {
        let mut s = PosetSet::new();
        for p in iter {
            s.insert(p);
        }
        s
    }
}

impl<'a> IntoIterator for &'a PosetSet {
    type Item = &'a Poset;
    type IntoIter = std::slice::Iter<'a, Poset>;
    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}
