//! Finite labelled posets with boxes.
//!
//! A [`Poset`] is a finite set of events (densely numbered `0..n`), a strict
//! partial order kept transitively closed, a labelling, and a set of
//! non-empty boxes. Event sets are represented as 64-bit masks, so a single
//! poset holds at most [`MAX_EVENTS`] events.

mod canon;
mod dot;
mod enumerate;
mod hom;
mod json;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use canon::{canonical_key, CanonicalKey, PosetSet};
pub use dot::to_dot;
pub use enumerate::{box_weakenings, strengthenings, weakenings};
pub use hom::{
    factorize_subsumption, find_homomorphism, find_homomorphism_with, iso, subsumed_by, HomMode, Morphism,
    SearchStrategy,
};
pub use json::{PosetJson, PosetJsonEvent};

/// Upper bound on the number of events of a single poset.
pub const MAX_EVENTS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("event set {0} is not a subset of the {1} events of the poset")]
    OutOfDomain(EventSet, usize),
    #[error("duplicate event id {0}")]
    DuplicateId(u64),
    #[error("unknown event id {0}")]
    UnknownId(u64),
    #[error("boxes must be non-empty")]
    EmptyBox,
    #[error("order contains a cycle through event {0}")]
    Cycle(usize),
    #[error("labels must be non-empty identifiers, got {0:?}")]
    BadLabel(String),
    #[error("too many events ({0}); at most {MAX_EVENTS} are supported")]
    TooManyEvents(usize),
    #[error("malformed poset JSON: {0}")]
    Json(String),
}

/// Position of an event inside one poset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EventId(pub usize);

impl EventId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for EventId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Action label. Cheap to clone.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Label(Arc<str>);

impl Label {
    pub fn new(name: &str) -> Result<Label, PosetError> {
        if name.is_empty() || name.chars().any(char::is_whitespace) {
            return Err(PosetError::BadLabel(name.to_string()));
        }
        Ok(Label(Arc::from(name)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Label {
    /// Panics on an empty label; use [`Label::new`] for untrusted input.
    fn from(s: &str) -> Self {
        Label::new(s).expect("invalid label")
    }
}

impl From<Label> for String {
    fn from(l: Label) -> String {
        l.0.to_string()
    }
}

impl TryFrom<String> for Label {
    type Error = PosetError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        Label::new(&s)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

/// A set of events of one poset, as a bit mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EventSet(pub u64);

impl EventSet {
    pub const EMPTY: EventSet = EventSet(0);

    pub fn full(n: usize) -> EventSet {
        assert!(n <= MAX_EVENTS, "at most {MAX_EVENTS} events");
        if n == 64 {
            EventSet(u64::MAX)
        } else {
            EventSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> EventSet {
        EventSet(1u64 << i)
    }

    pub fn from_events<I: IntoIterator<Item = usize>>(it: I) -> EventSet {
        it.into_iter().fold(EventSet::EMPTY, |s, i| s.with(i))
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> EventSet {
        EventSet(self.0 | 1u64 << i)
    }

    pub fn without(self, i: usize) -> EventSet {
        EventSet(self.0 & !(1u64 << i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, o: EventSet) -> EventSet {
        EventSet(self.0 | o.0)
    }

    pub fn intersection(self, o: EventSet) -> EventSet {
        EventSet(self.0 & o.0)
    }

    pub fn difference(self, o: EventSet) -> EventSet {
        EventSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: EventSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn intersects(self, o: EventSet) -> bool {
        self.0 & o.0 != 0
    }

    /// Complement relative to `0..n`.
    pub fn complement(self, n: usize) -> EventSet {
        EventSet::full(n).difference(self)
    }

    pub fn shift(self, by: usize) -> EventSet {
        if self.0 == 0 {
            return self;
        }
        EventSet(self.0 << by)
    }

    /// Lowest member.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> EventIter {
        EventIter(self.0)
    }

    /// Renumbers `self ∩ mask` so that the members of `mask` become `0..|mask|`
    /// in ascending order.
    pub fn compress(self, mask: EventSet) -> EventSet {
        let mut out = 0u64;
        for (k, i) in mask.iter().enumerate() {
            if self.contains(i) {
                out |= 1 << k;
            }
        }
        EventSet(out)
    }

    /// Image under a map given as a slice `i ↦ map[i]`.
    pub fn map(self, map: &[usize]) -> EventSet {
        self.iter().fold(EventSet::EMPTY, |s, i| s.with(map[i]))
    }
}

impl fmt::Debug for EventSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for EventSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for EventSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for EventSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let ids = Vec::<usize>::deserialize(deserializer)?;
        if let Some(&bad) = ids.iter().find(|&&i| i >= MAX_EVENTS) {
            return Err(serde::de::Error::custom(format!("event id {bad} out of range")));
        }
        Ok(EventSet::from_events(ids))
    }
}

impl FromIterator<usize> for EventSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        EventSet::from_events(iter)
    }
}

pub struct EventIter(u64);

impl Iterator for EventIter {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for EventIter {}

/// Structural flags of an event subset, see [`Poset::classify_subset`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SubsetClass {
    pub nontrivial: bool,
    pub nested: bool,
    pub prefix: bool,
    pub isolated: bool,
    /// No event outside the set lies below an event inside it.
    pub downset: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitMode {
    Seq,
    Par,
}

/// A finite labelled strict partial order with boxes.
///
/// Values are immutable once built; every constructor returns a poset whose
/// order is irreflexive and transitively closed and whose boxes are
/// non-empty and pairwise distinct.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    labels: Vec<Label>,
    succ: Vec<EventSet>,
    pred: Vec<EventSet>,
    boxes: Vec<EventSet>,
}

impl Poset {
    pub fn unit() -> Poset {
        Poset {
            labels: Vec::new(),
            succ: Vec::new(),
            pred: Vec::new(),
            boxes: Vec::new(),
        }
    }

    pub fn atom(label: impl Into<Label>) -> Poset {
        Poset {
            labels: vec![label.into()],
            succ: vec![EventSet::EMPTY],
            pred: vec![EventSet::EMPTY],
            boxes: Vec::new(),
        }
    }

    /// Builds a poset from labels, arbitrary DAG edges (closed transitively)
    /// and boxes.
    pub fn from_parts(
        labels: Vec<Label>,
        edges: impl IntoIterator<Item = (usize, usize)>,
        boxes: impl IntoIterator<Item = EventSet>,
    ) -> Result<Poset, PosetError> {
        let n = labels.len();
        if n > MAX_EVENTS {
            return Err(PosetError::TooManyEvents(n));
        }
        let all = EventSet::full(n);
        let mut succ = vec![EventSet::EMPTY; n];
        for (a, b) in edges {
            if a >= n {
                return Err(PosetError::UnknownId(a as u64));
            }
            if b >= n {
                return Err(PosetError::UnknownId(b as u64));
            }
            succ[a] = succ[a].with(b);
        }
        transitive_close(&mut succ);
        if let Some(i) = (0..n).find(|&i| succ[i].contains(i)) {
            return Err(PosetError::Cycle(i));
        }
        let mut bs = Vec::new();
        for b in boxes {
            if b.is_empty() {
                return Err(PosetError::EmptyBox);
            }
            if !b.is_subset(all) {
                return Err(PosetError::OutOfDomain(b, n));
            }
            bs.push(b);
        }
        Ok(Poset::from_closed(labels, succ, bs))
    }

    /// `succ` must already be a transitively closed strict order.
    fn from_closed(labels: Vec<Label>, succ: Vec<EventSet>, mut boxes: Vec<EventSet>) -> Poset {
        let n = labels.len();
        let mut pred = vec![EventSet::EMPTY; n];
        for (i, s) in succ.iter().enumerate() {
            for j in s.iter() {
                pred[j] = pred[j].with(i);
            }
        }
        boxes.sort_unstable();
        boxes.dedup();
        let p = Poset {
            labels,
            succ,
            pred,
            boxes,
        };
        debug_assert_eq!(p.check_invariants(), Ok(()));
        p
    }

    /// Re-checks every structural invariant.
    pub fn check_invariants(&self) -> Result<(), String> {
        let n = self.len();
        if self.succ.len() != n || self.pred.len() != n {
            return Err("adjacency size mismatch".into());
        }
        let all = self.events();
        for i in 0..n {
            if self.succ[i].contains(i) {
                return Err(format!("order is reflexive at {i}"));
            }
            if !self.succ[i].is_subset(all) {
                return Err(format!("successor of {i} out of range"));
            }
            for j in self.succ[i].iter() {
                if !self.succ[j].is_subset(self.succ[i]) {
                    return Err(format!("order not transitive through {i}<{j}"));
                }
                if !self.pred[j].contains(i) {
                    return Err(format!("predecessor table missing {i}<{j}"));
                }
            }
            if self.pred[i].len() != (0..n).filter(|&k| self.succ[k].contains(i)).count() {
                return Err(format!("predecessor table inconsistent at {i}"));
            }
        }
        for w in self.boxes.windows(2) {
            if w[0] >= w[1] {
                return Err("boxes not sorted or duplicated".into());
            }
        }
        for b in &self.boxes {
            if b.is_empty() {
                return Err("empty box".into());
            }
            if !b.is_subset(all) {
                return Err(format!("box {b} out of range"));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn events(&self) -> EventSet {
        EventSet::full(self.len())
    }

    pub fn label(&self, e: usize) -> &Label {
        &self.labels[e]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    /// Strict order test `a < b`.
    pub fn lt(&self, a: usize, b: usize) -> bool {
        self.succ[a].contains(b)
    }

    /// Reflexive order test `a ≤ b`.
    pub fn le(&self, a: usize, b: usize) -> bool {
        a == b || self.lt(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.lt(a, b) || self.lt(b, a)
    }

    pub fn successors(&self, e: usize) -> EventSet {
        self.succ[e]
    }

    pub fn predecessors(&self, e: usize) -> EventSet {
        self.pred[e]
    }

    /// All strict order pairs `(a, b)` with `a < b`, ascending.
    pub fn order_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.iter().map(move |j| (i, j)))
    }

    pub fn order_size(&self) -> usize {
        self.succ.iter().map(|s| s.len()).sum()
    }

    /// Covering pairs of the order (its transitive reduction).
    pub fn covering_pairs(&self) -> Vec<(usize, usize)> {
        self.order_pairs()
            .filter(|&(a, b)| !self.succ[a].intersects(self.pred[b]))
            .collect()
    }

    /// Boxes in ascending mask order.
    pub fn boxes(&self) -> &[EventSet] {
        &self.boxes
    }

    pub fn has_box(&self, b: EventSet) -> bool {
        self.boxes.binary_search(&b).is_ok()
    }

    /// Whether the whole event set is a box. Always false for the empty poset.
    pub fn has_full_box(&self) -> bool {
        !self.is_empty() && self.has_box(self.events())
    }

    /// Number of boxes containing `e`.
    pub fn box_count(&self, e: usize) -> usize {
        self.boxes.iter().filter(|b| b.contains(e)).count()
    }

    pub fn seq(&self, other: &Poset) -> Poset {
        self.compose(other, true)
    }

    pub fn par(&self, other: &Poset) -> Poset {
        self.compose(other, false)
    }

    fn compose(&self, other: &Poset, sequential: bool) -> Poset {
        let n = self.len();
        let total = n + other.len();
        assert!(
            total <= MAX_EVENTS,
            "composition would have {total} events; at most {MAX_EVENTS} are supported"
        );
        let right = EventSet::full(other.len()).shift(n);
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        let mut succ: Vec<EventSet> = self
            .succ
            .iter()
            .map(|s| if sequential { s.union(right) } else { *s })
            .collect();
        succ.extend(other.succ.iter().map(|s| s.shift(n)));
        let mut boxes = self.boxes.clone();
        boxes.extend(other.boxes.iter().map(|b| b.shift(n)));
        Poset::from_closed(labels, succ, boxes)
    }

    /// Adds the full event set as a box. The empty poset is returned as is.
    pub fn boxed(&self) -> Poset {
        if self.is_empty() || self.has_full_box() {
            return self.clone();
        }
        let mut boxes = self.boxes.clone();
        boxes.push(self.events());
        Poset::from_closed(self.labels.clone(), self.succ.clone(), boxes)
    }

    /// Removes the full box, if present.
    pub fn unboxed(&self) -> Poset {
        if !self.has_full_box() {
            return self.clone();
        }
        let all = self.events();
        let boxes = self.boxes.iter().copied().filter(|&b| b != all).collect();
        Poset::from_closed(self.labels.clone(), self.succ.clone(), boxes)
    }

    /// Restriction to `a`, re-indexed densely in ascending id order. Only
    /// boxes entirely inside `a` survive.
    pub fn restrict(&self, a: EventSet) -> Result<Poset, PosetError> {
        if !a.is_subset(self.events()) {
            return Err(PosetError::OutOfDomain(a, self.len()));
        }
        Ok(self.restrict_unchecked(a))
    }

    pub(crate) fn restrict_unchecked(&self, a: EventSet) -> Poset {
        if a == self.events() {
            return self.clone();
        }
        let labels = a.iter().map(|i| self.labels[i].clone()).collect();
        let succ = a.iter().map(|i| self.succ[i].compress(a)).collect();
        let boxes = self
            .boxes
            .iter()
            .filter(|b| b.is_subset(a))
            .map(|b| b.compress(a))
            .collect();
        Poset::from_closed(labels, succ, boxes)
    }

    /// Same events and labels, a different (closed) order and box set.
    pub(crate) fn with_structure(&self, succ: Vec<EventSet>, boxes: Vec<EventSet>) -> Poset {
        Poset::from_closed(self.labels.clone(), succ, boxes)
    }

    /// Applies a relabelling of event ids: event `i` becomes `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Poset {
        let n = self.len();
        assert_eq!(perm.len(), n);
        let mut labels = vec![self.labels.first().cloned().unwrap_or_else(|| "x".into()); n];
        let mut succ = vec![EventSet::EMPTY; n];
        for i in 0..n {
            labels[perm[i]] = self.labels[i].clone();
            succ[perm[i]] = self.succ[i].map(perm);
        }
        let boxes = self.boxes.iter().map(|b| b.map(perm)).collect();
        Poset::from_closed(labels, succ, boxes)
    }

    pub fn is_nested(&self, a: EventSet) -> bool {
        self.boxes.iter().all(|&b| b.is_subset(a) || !b.intersects(a))
    }

    pub fn is_prefix(&self, a: EventSet) -> bool {
        let rest = a.complement(self.len());
        a.iter().all(|e| rest.is_subset(self.succ[e]))
    }

    pub fn is_isolated(&self, a: EventSet) -> bool {
        let rest = a.complement(self.len());
        a.iter()
            .all(|e| !self.succ[e].intersects(rest) && !self.pred[e].intersects(rest))
    }

    pub fn is_downset(&self, a: EventSet) -> bool {
        a.iter().all(|e| self.pred[e].is_subset(a))
    }

    /// Structural flags of `a`; errors when `a` is not a set of events of `self`.
    pub fn classify_subset(&self, a: EventSet) -> Result<SubsetClass, PosetError> {
        if !a.is_subset(self.events()) {
            return Err(PosetError::OutOfDomain(a, self.len()));
        }
        Ok(SubsetClass {
            nontrivial: !a.is_empty() && a != self.events(),
            nested: self.is_nested(a),
            prefix: self.is_prefix(a),
            isolated: self.is_isolated(a),
            downset: self.is_downset(a),
        })
    }

    /// Whether `self ≅ self|a ⨾ self|ā` (seq) or `self ≅ self|a ∥ self|ā` (par).
    pub fn split_check(&self, a: EventSet, mode: SplitMode) -> Result<bool, PosetError> {
        let c = self.classify_subset(a)?;
        Ok(c.nested
            && match mode {
                SplitMode::Seq => c.prefix,
                SplitMode::Par => c.isolated,
            })
    }
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poset{{")?;
        for (i, l) in self.labels.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{i}:{l}")?;
        }
        write!(f, "; <:")?;
        for (a, b) in self.covering_pairs() {
            write!(f, " {a}<{b}")?;
        }
        write!(f, "; boxes:")?;
        for b in &self.boxes {
            write!(f, " {b}")?;
        }
        write!(f, "}}")
    }
}

pub(crate) fn transitive_close(succ: &mut [EventSet]) {
    let n = succ.len();
    for k in 0..n {
        for i in 0..n {
            if succ[i].contains(k) {
                succ[i] = succ[i].union(succ[k]);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab_seq() -> Poset {
        Poset::atom("a").seq(&Poset::atom("b"))
    }

    #[test]
    fn constants() {
        let u = Poset::unit();
        assert!(u.is_empty());
        assert!(u.boxes().is_empty());
        let a = Poset::atom("a");
        assert_eq!(a.len(), 1);
        assert_eq!(a.label(0).as_str(), "a");
        assert_eq!(a.order_size(), 0);
        assert!(!iso(&a, &Poset::atom("b")));
    }

    #[test]
    fn compositions() {
        let s = ab_seq();
        assert_eq!(s.order_pairs().collect::<Vec<_>>(), vec![(0, 1)]);
        let p = Poset::atom("a").par(&Poset::atom("b"));
        assert_eq!(p.order_size(), 0);
        assert_eq!(p.label(1).as_str(), "b");
    }

    #[test]
    fn boxing() {
        let a = Poset::atom("a").boxed();
        assert_eq!(a.boxes(), &[EventSet::singleton(0)]);
        assert_eq!(Poset::unit().boxed(), Poset::unit());
        assert_eq!(a.boxed(), a);
        assert_eq!(a.unboxed(), Poset::atom("a"));
    }

    #[test]
    fn restriction_cuts_straddling_boxes() {
        // [a;b];c restricted to {a, c}
        let p = ab_seq().boxed().seq(&Poset::atom("c"));
        let r = p.restrict(EventSet::from_events([0, 2])).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r.label(0).as_str(), "a");
        assert_eq!(r.label(1).as_str(), "c");
        assert!(r.lt(0, 1));
        assert!(r.boxes().is_empty());
        assert!(iso(&p.restrict(p.events()).unwrap(), &p));
        assert!(iso(&p.restrict(EventSet::EMPTY).unwrap(), &Poset::unit()));
        assert!(matches!(
            p.restrict(EventSet::singleton(5)),
            Err(PosetError::OutOfDomain(..))
        ));
    }

    #[test]
    fn classification() {
        let c = ab_seq().classify_subset(EventSet::singleton(0)).unwrap();
        assert!(c.prefix && c.nested && c.nontrivial && !c.isolated);
        let par = Poset::atom("a").par(&Poset::atom("b"));
        let c = par.classify_subset(EventSet::singleton(0)).unwrap();
        assert!(c.isolated && c.nested);
        let boxed = ab_seq().boxed();
        let c = boxed.classify_subset(EventSet::singleton(0)).unwrap();
        assert!(!c.nested);
        let c = ab_seq().classify_subset(EventSet::singleton(1)).unwrap();
        assert!(!c.downset && !c.prefix);
    }

    #[test]
    fn splits() {
        let s = ab_seq();
        assert!(s.split_check(EventSet::singleton(0), SplitMode::Seq).unwrap());
        assert!(!s.split_check(EventSet::singleton(1), SplitMode::Seq).unwrap());
        let bp = Poset::atom("a").par(&Poset::atom("b")).boxed();
        let a = EventSet::singleton(0);
        assert!(!bp.split_check(a, SplitMode::Par).unwrap());
        // explicit check: the parallel product of the restrictions has no box
        let rebuilt = bp
            .restrict(a)
            .unwrap()
            .par(&bp.restrict(a.complement(2)).unwrap());
        assert!(!iso(&bp, &rebuilt));
    }

    #[test]
    fn from_parts_rejects_bad_input() {
        let l = vec![Label::from("a"), Label::from("b")];
        assert_eq!(
            Poset::from_parts(l.clone(), [(0, 1), (1, 0)], []),
            Err(PosetError::Cycle(0))
        );
        assert_eq!(
            Poset::from_parts(l.clone(), [], [EventSet::EMPTY]),
            Err(PosetError::EmptyBox)
        );
        assert_eq!(Poset::from_parts(l, [(0, 2)], []), Err(PosetError::UnknownId(2)));
        assert!(Label::new("").is_err());
    }

    #[test]
    fn from_parts_closes_edges() {
        let l = ["a", "b", "c"].map(Label::from).to_vec();
        let p = Poset::from_parts(l, [(0, 1), (1, 2)], []).unwrap();
        assert!(p.lt(0, 2));
        assert_eq!(p.covering_pairs(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn compress_and_permute() {
        let s = EventSet::from_events([1, 3, 4]);
        assert_eq!(
            s.compress(EventSet::from_events([0, 3, 4])),
            EventSet::from_events([1, 2])
        );
        let p = ab_seq();
        let q = p.permute(&[1, 0]);
        assert!(q.lt(1, 0));
        assert_eq!(q.label(1).as_str(), "a");
    }
}
