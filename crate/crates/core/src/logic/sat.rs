//! The compositional model checker.
//!
//! Every modality quantifies over event subsets of the poset at hand; the
//! relation decides which subsets qualify. Candidate subsets are tried in
//! ascending size, lexicographically within a size, so the reported witness
//! is the first one in that order.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::poset::{EventId, EventSet, Label, Poset};

use super::{check_fragment, Formula, LogicError, Relation};

/// Deliberate rule corruptions, used to check that the differential harness
/// notices a wrong rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fault {
    /// Under `≅`, accept isolated parallel splits that cut through a box.
    DropParNesting,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// Why a formula holds. Event sets are expressed in the ids of the poset the
/// step applies to; the parts handed down are restricted and re-indexed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Witness {
    Emp,
    Atom {
        event: EventId,
    },
    /// The negated formula fails; there is nothing further to show.
    Not,
    And {
        left: Box<Witness>,
        right: Box<Witness>,
    },
    Or {
        side: Side,
        inner: Box<Witness>,
    },
    Then {
        part: EventSet,
        left: Box<Witness>,
        right: Box<Witness>,
    },
    Next {
        part: EventSet,
        left: Box<Witness>,
        right: Box<Witness>,
    },
    /// `unboxed` tells whether the inner formula was checked with the full
    /// box removed.
    Boxed {
        unboxed: bool,
        inner: Box<Witness>,
    },
    Context {
        part: EventSet,
        inner: Box<Witness>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SatResult {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl SatResult {
    /// Re-checks a positive answer step by step against its witness.
    /// Negative answers carry no witness and replay trivially.
    pub fn replay(&self, p: &Poset, phi: &Formula, relation: Relation) -> bool {
        match (&self.witness, self.holds) {
            (Some(w), true) => replay(p, phi, relation, w),
            (None, false) => true,
            _ => false,
        }
    }
}

type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    Emp,
    Atom(Label),
    And(NodeId, NodeId),
    Or(NodeId, NodeId),
    Neg(NodeId),
    Then(NodeId, NodeId),
    Next(NodeId, NodeId),
    Boxed(NodeId),
    Context(NodeId),
}

/// A model checker with a hash-consed formula store and a memo table keyed
/// by (poset, subformula, relation). Reuse one instance across queries that
/// share subformulas.
#[derive(Default)]
pub struct ModelChecker {
    nodes: Vec<Node>,
    ids: HashMap<Node, NodeId>,
    memo: HashMap<(Poset, NodeId, Relation), bool>,
    fault: Option<Fault>,
}

impl ModelChecker {
    pub fn new() -> ModelChecker {
        ModelChecker::default()
    }

    pub fn with_fault(fault: Fault) -> ModelChecker {
        ModelChecker {
            fault: Some(fault),
            ..ModelChecker::default()
        }
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    pub fn check(&mut self, p: &Poset, phi: &Formula, relation: Relation) -> Result<SatResult, LogicError> {
        check_fragment(phi, relation)?;
        let id = self.intern(phi);
        let holds = self.eval(p, id, relation);
        let witness = if holds {
            Some(self.explain(p, id, relation))
        } else {
            None
        };
        Ok(SatResult { holds, witness })
    }

    pub fn holds(&mut self, p: &Poset, phi: &Formula, relation: Relation) -> Result<bool, LogicError> {
        check_fragment(phi, relation)?;
        let id = self.intern(phi);
        Ok(self.eval(p, id, relation))
    }

    fn intern(&mut self, phi: &Formula) -> NodeId {
        let node = match phi {
            Formula::Emp => Node::Emp,
            Formula::Atom(a) => Node::Atom(a.clone()),
            Formula::And(a, b) => Node::And(self.intern(a), self.intern(b)),
            Formula::Or(a, b) => Node::Or(self.intern(a), self.intern(b)),
            Formula::Neg(a) => Node::Neg(self.intern(a)),
            Formula::SeqThen(a, b) => Node::Then(self.intern(a), self.intern(b)),
            Formula::ParNext(a, b) => Node::Next(self.intern(a), self.intern(b)),
            Formula::BoxMod(a) => Node::Boxed(self.intern(a)),
            Formula::ContextMod(a) => Node::Context(self.intern(a)),
        };
        if let Some(&id) = self.ids.get(&node) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(node.clone());
        self.ids.insert(node, id);
        id
    }

    fn eval(&mut self, p: &Poset, id: NodeId, rel: Relation) -> bool {
        match &self.nodes[id] {
            Node::Emp => return p.is_empty(),
            Node::Atom(a) => return atom_holds(p, a, rel),
            _ => {}
        }
        if let Some(&v) = self.memo.get(&(p.clone(), id, rel)) {
            return v;
        }
        let v = match self.nodes[id].clone() {
            Node::Emp | Node::Atom(_) => unreachable!(),
            Node::And(a, b) => self.eval(p, a, rel) && self.eval(p, b, rel),
            Node::Or(a, b) => self.eval(p, a, rel) || self.eval(p, b, rel),
            Node::Neg(a) => !self.eval(p, a, rel),
            Node::Then(a, b) => self.find_split(p, seq_candidates(p, rel), a, b, rel).is_some(),
            Node::Next(a, b) => {
                let cands = par_candidates(p, rel, self.fault);
                self.find_split(p, cands, a, b, rel).is_some()
            }
            Node::Boxed(a) => self.box_inner(p, a, rel).is_some(),
            Node::Context(a) => self.find_part(p, a, rel).is_some(),
        };
        self.memo.insert((p.clone(), id, rel), v);
        v
    }

    fn find_split(
        &mut self,
        p: &Poset,
        candidates: impl IntoIterator<Item = EventSet>,
        left: NodeId,
        right: NodeId,
        rel: Relation,
    ) -> Option<EventSet> {
        let n = p.len();
        candidates.into_iter().find(|&a| {
            self.eval(&p.restrict_unchecked(a), left, rel)
                && self.eval(&p.restrict_unchecked(a.complement(n)), right, rel)
        })
    }

    fn find_part(&mut self, p: &Poset, inner: NodeId, rel: Relation) -> Option<EventSet> {
        all_subsets(p.len())
            .iter()
            .map(|&bits| EventSet(bits))
            .find(|&a| self.eval(&p.restrict_unchecked(a), inner, rel))
    }

    /// The poset the body of a box modality holds on, if any, and whether
    /// it is `p` with its full box removed.
    fn box_inner(&mut self, p: &Poset, inner: NodeId, rel: Relation) -> Option<(Poset, bool)> {
        box_options(p, rel)
            .into_iter()
            .find(|(q, _)| self.eval(q, inner, rel))
    }

    fn explain(&mut self, p: &Poset, id: NodeId, rel: Relation) -> Witness {
        let boxed = |w: Witness| Box::new(w);
        match self.nodes[id].clone() {
            Node::Emp => Witness::Emp,
            Node::Atom(_) => Witness::Atom { event: EventId(0) },
            Node::Neg(_) => Witness::Not,
            Node::And(a, b) => Witness::And {
                left: boxed(self.explain(p, a, rel)),
                right: boxed(self.explain(p, b, rel)),
            },
            Node::Or(a, b) => {
                if self.eval(p, a, rel) {
                    Witness::Or {
                        side: Side::Left,
                        inner: boxed(self.explain(p, a, rel)),
                    }
                } else {
                    Witness::Or {
                        side: Side::Right,
                        inner: boxed(self.explain(p, b, rel)),
                    }
                }
            }
            Node::Then(a, b) | Node::Next(a, b) => {
                let is_seq = matches!(self.nodes[id], Node::Then(..));
                let cands = if is_seq {
                    seq_candidates(p, rel)
                } else {
                    par_candidates(p, rel, self.fault)
                };
                let part = self
                    .find_split(p, cands, a, b, rel)
                    .expect("explain called on a false split");
                let left = boxed(self.explain(&p.restrict_unchecked(part), a, rel));
                let right = boxed(self.explain(&p.restrict_unchecked(part.complement(p.len())), b, rel));
                if is_seq {
                    Witness::Then { part, left, right }
                } else {
                    Witness::Next { part, left, right }
                }
            }
            Node::Boxed(a) => {
                let (q, unboxed) = self.box_inner(p, a, rel).expect("explain called on a false box");
                Witness::Boxed {
                    unboxed,
                    inner: boxed(self.explain(&q, a, rel)),
                }
            }
            Node::Context(a) => {
                let part = self
                    .find_part(p, a, rel)
                    .expect("explain called on a false context");
                Witness::Context {
                    part,
                    inner: boxed(self.explain(&p.restrict_unchecked(part), a, rel)),
                }
            }
        }
    }
}

/// Satisfaction of `phi` by `p` under `relation`, with a witness when it holds.
pub fn sat(p: &Poset, phi: &Formula, relation: Relation) -> Result<SatResult, LogicError> {
    ModelChecker::new().check(p, phi, relation)
}

fn atom_holds(p: &Poset, a: &Label, rel: Relation) -> bool {
    p.len() == 1 && p.label(0) == a && (rel == Relation::Sub || p.boxes().is_empty())
}

/// Posets on which the body of `[φ]` is evaluated, in the order tried.
fn box_options(p: &Poset, rel: Relation) -> Vec<(Poset, bool)> {
    if p.is_empty() {
        return vec![(p.clone(), false)];
    }
    match rel {
        Relation::Rev => vec![(p.unboxed(), p.has_full_box())],
        _ if p.has_full_box() => vec![(p.clone(), false), (p.unboxed(), true)],
        _ => Vec::new(),
    }
}

fn lex_cmp(a: EventSet, b: EventSet) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter()))
}

thread_local! {
    static SUBSETS: RefCell<HashMap<usize, Rc<[u64]>>> = RefCell::new(HashMap::new());
}

/// All subsets of `0..n` ordered by size, then lexicographically.
fn all_subsets(n: usize) -> Rc<[u64]> {
    assert!(n <= 24, "subset enumeration over {n} events is out of reach");
    SUBSETS.with(|cache| {
        cache
            .borrow_mut()
            .entry(n)
            .or_insert_with(|| {
                let mut all: Vec<u64> = (0..1u64 << n).collect();
                all.sort_by(|&a, &b| lex_cmp(EventSet(a), EventSet(b)));
                all.into()
            })
            .clone()
    })
}

fn seq_candidates(p: &Poset, rel: Relation) -> Vec<EventSet> {
    let n = p.len();
    match rel {
        // prefix sets form a chain: the one of size k can only be the set of
        // events with fewer than k predecessors
        Relation::Iso | Relation::Sub => (0..=n)
            .map(|k| {
                (0..n)
                    .filter(|&e| p.predecessors(e).len() < k)
                    .collect::<EventSet>()
            })
            .enumerate()
            .filter(|&(k, a)| a.len() == k && p.is_prefix(a) && (rel == Relation::Sub || p.is_nested(a)))
            .map(|(_, a)| a)
            .collect(),
        Relation::Rev => all_subsets(n)
            .iter()
            .map(|&bits| EventSet(bits))
            .filter(|&a| p.is_downset(a) && p.is_nested(a))
            .collect(),
    }
}

/// Classes of the equivalence generated by comparability, and by sharing a
/// box unless `boxes` is false.
fn components(p: &Poset, boxes: bool) -> Vec<EventSet> {
    let mut classes = Vec::new();
    let mut seen = EventSet::EMPTY;
    for e in 0..p.len() {
        if seen.contains(e) {
            continue;
        }
        let mut class = EventSet::singleton(e);
        loop {
            let mut grown = class;
            for f in class.iter() {
                grown = grown.union(p.successors(f)).union(p.predecessors(f));
            }
            if boxes {
                for &b in p.boxes() {
                    if b.intersects(grown) {
                        grown = grown.union(b);
                    }
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
    classes
}

fn par_candidates(p: &Poset, rel: Relation, fault: Option<Fault>) -> Vec<EventSet> {
    if rel == Relation::Sub {
        return all_subsets(p.len()).iter().map(|&bits| EventSet(bits)).collect();
    }
    let keep_boxes = !(rel == Relation::Iso && fault == Some(Fault::DropParNesting));
    let classes = components(p, keep_boxes);
    let mut unions: Vec<EventSet> = all_subsets(classes.len())
        .iter()
        .map(|&pick| {
            EventSet(pick)
                .iter()
                .fold(EventSet::EMPTY, |acc, i| acc.union(classes[i]))
        })
        .collect();
    unions.sort_by(|&a, &b| lex_cmp(a, b));
    unions
}

/// Whether `part` is an admissible split of `p` for the given connective.
fn split_admissible(p: &Poset, part: EventSet, seq: bool, rel: Relation) -> bool {
    if !part.is_subset(p.events()) {
        return false;
    }
    match (seq, rel) {
        (true, Relation::Iso) => p.is_prefix(part) && p.is_nested(part),
        (true, Relation::Sub) => p.is_prefix(part),
        (true, Relation::Rev) => p.is_downset(part) && p.is_nested(part),
        (false, Relation::Sub) => true,
        (false, _) => p.is_isolated(part) && p.is_nested(part),
    }
}

fn replay(p: &Poset, phi: &Formula, rel: Relation, w: &Witness) -> bool {
    match (phi, w) {
        (Formula::Emp, Witness::Emp) => p.is_empty(),
        (Formula::Atom(a), Witness::Atom { event }) => event.0 == 0 && atom_holds(p, a, rel),
        (Formula::Neg(inner), Witness::Not) => {
            rel == Relation::Iso && !ModelChecker::new().holds(p, inner, rel).unwrap_or(true)
        }
        (Formula::And(a, b), Witness::And { left, right }) => {
            replay(p, a, rel, left) && replay(p, b, rel, right)
        }
        (Formula::Or(a, b), Witness::Or { side, inner }) => match side {
            Side::Left => replay(p, a, rel, inner),
            Side::Right => replay(p, b, rel, inner),
        },
        (Formula::SeqThen(a, b), Witness::Then { part, left, right })
        | (Formula::ParNext(a, b), Witness::Next { part, left, right }) => {
            let seq = matches!(phi, Formula::SeqThen(..));
            split_admissible(p, *part, seq, rel)
                && replay(&p.restrict_unchecked(*part), a, rel, left)
                && replay(&p.restrict_unchecked(part.complement(p.len())), b, rel, right)
        }
        (Formula::BoxMod(a), Witness::Boxed { unboxed, inner }) => {
            let q = if *unboxed { p.unboxed() } else { p.clone() };
            let shape_ok = p.is_empty()
                || match rel {
                    Relation::Rev => q == p.unboxed(),
                    _ => p.has_full_box(),
                };
            shape_ok && replay(&q, a, rel, inner)
        }
        (Formula::ContextMod(a), Witness::Context { part, inner }) => {
            part.is_subset(p.events()) && replay(&p.restrict_unchecked(*part), a, rel, inner)
        }
        _ => false,
    }
}
