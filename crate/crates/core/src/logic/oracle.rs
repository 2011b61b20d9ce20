//! A brute-force reading of satisfaction, used to cross-check the model
//! checker on small posets.
//!
//! Each clause quantifies over all witnesses related to the poset (itself
//! under `≅`, every weakening under `⊑`, every strengthening with a bounded
//! number of new boxes under `⊒`) and over every decomposition of the
//! witness, recognised by an explicit isomorphism test. None of the
//! checker's structural shortcuts are used. Posets are re-encoded into a
//! small bit-packed form with its own composition, restriction and
//! permutation-based morphism checks, so nothing here goes through the
//! `poset` module beyond reading the input.

use std::rc::Rc;

use rustc_hash::FxHashMap as HashMap;
use serde::Serialize;

use crate::poset::{Label, Poset};

use super::{check_fragment, Formula, LogicError, Relation};

/// Largest poset the oracle can encode.
pub const ORACLE_MAX_EVENTS: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleVerdict {
    True,
    False,
    /// The poset or the work needed exceeds the caps.
    Unknown,
}

impl OracleVerdict {
    pub fn as_bool(self) -> Option<bool> {
        match self {
            OracleVerdict::True => Some(true),
            OracleVerdict::False => Some(false),
            OracleVerdict::Unknown => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleCaps {
    /// At most [`ORACLE_MAX_EVENTS`].
    pub max_events: usize,
    /// New boxes a `⊒` witness may add.
    pub extra_boxes: usize,
    /// Witness-and-subset visits allowed for one query.
    pub max_work: u64,
}

impl Default for OracleCaps {
    fn default() -> OracleCaps {
        OracleCaps {
            max_events: 4,
            extra_boxes: 2,
            max_work: 5_000_000,
        }
    }
}

/// A poset on at most six events. `succ[i]` is the bit set of events above
/// `i`; bit `b` of `boxes` is set when the event set with mask `b` is a box.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Small {
    n: u8,
    labels: [u8; ORACLE_MAX_EVENTS],
    succ: [u8; ORACLE_MAX_EVENTS],
    boxes: u64,
}

fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            return None;
        }
        let i = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        Some(i)
    })
}

/// Packs the events of `mask` into the low bits, keeping their order.
fn compress(set: u8, mask: u8) -> u8 {
    let mut out = 0;
    let mut k = 0;
    for i in 0..8 {
        if mask >> i & 1 == 1 {
            out |= (set >> i & 1) << k;
            k += 1;
        }
    }
    out
}

impl Small {
    const EMPTY: Small = Small {
        n: 0,
        labels: [0; ORACLE_MAX_EVENTS],
        succ: [0; ORACLE_MAX_EVENTS],
        boxes: 0,
    };

    fn atom(label: u8) -> Small {
        let mut s = Small::EMPTY;
        s.n = 1;
        s.labels[0] = label;
        s
    }

    fn all(&self) -> u8 {
        ((1u16 << self.n) - 1) as u8
    }

    fn lt(&self, a: usize, b: usize) -> bool {
        self.succ[a] >> b & 1 == 1
    }

    fn has_full_box(&self) -> bool {
        self.n > 0 && self.boxes >> self.all() & 1 == 1
    }

    fn restrict(&self, a: u8) -> Small {
        let mut out = Small::EMPTY;
        for (k, i) in bits(a as u64).enumerate() {
            out.labels[k] = self.labels[i];
            out.succ[k] = compress(self.succ[i] & a, a);
            out.n += 1;
        }
        for b in bits(self.boxes) {
            if b as u8 & !a == 0 {
                out.boxes |= 1 << compress(b as u8, a);
            }
        }
        out
    }

    fn join(&self, other: &Small, seq: bool) -> Option<Small> {
        let (n, m) = (self.n as usize, other.n as usize);
        if n + m > ORACLE_MAX_EVENTS {
            return None;
        }
        let mut out = *self;
        out.n = (n + m) as u8;
        let upper = (other.all() as u16) << n;
        for i in 0..n {
            if seq {
                out.succ[i] |= upper as u8;
            }
        }
        for j in 0..m {
            out.labels[n + j] = other.labels[j];
            out.succ[n + j] = ((other.succ[j] as u16) << n) as u8;
        }
        for b in bits(other.boxes) {
            out.boxes |= 1 << (b << n);
        }
        Some(out)
    }

    fn boxed(&self) -> Small {
        let mut out = *self;
        if self.n > 0 {
            out.boxes |= 1 << self.all();
        }
        out
    }

    fn without_full_box(&self) -> Small {
        let mut out = *self;
        if self.n > 0 {
            out.boxes &= !(1 << self.all());
        }
        out
    }

    fn map_set(set: u8, map: &[usize]) -> u8 {
        bits(set as u64).fold(0, |acc, i| acc | 1 << map[i])
    }

    /// `map` is a label-preserving bijection onto `target` that keeps order
    /// and boxes; with `exact`, it also reflects them.
    fn maps_onto(&self, target: &Small, map: &[usize], exact: bool) -> bool {
        let n = self.n as usize;
        if target.n != self.n || (0..n).any(|e| self.labels[e] != target.labels[map[e]]) {
            return false;
        }
        for x in 0..n {
            let image = Small::map_set(self.succ[x], map);
            let there = target.succ[map[x]];
            if image & !there != 0 || (exact && image != there) {
                return false;
            }
        }
        let mut image = 0u64;
        for b in bits(self.boxes) {
            image |= 1 << Small::map_set(b as u8, map);
        }
        image & !target.boxes == 0 && (!exact || image == target.boxes)
    }

    /// Closed strict orders on the same events whose pairs are those of
    /// `self` plus (`grow`) or minus (`!grow`) some.
    fn orders(&self, grow: bool) -> Vec<[u8; ORACLE_MAX_EVENTS]> {
        let n = self.n as usize;
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| a != b && (self.lt(a, b) != grow))
            .collect();
        let mut out = Vec::new();
        for mask in 0u64..1 << pairs.len() {
            let mut succ = if grow { self.succ } else { [0; ORACLE_MAX_EVENTS] };
            for (k, &(a, b)) in pairs.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    succ[a] |= 1 << b;
                }
            }
            let transitive = (0..n).all(|i| bits(succ[i] as u64).all(|j| succ[j] & !succ[i] == 0));
            let irreflexive = (0..n).all(|i| succ[i] >> i & 1 == 0);
            if transitive && irreflexive {
                out.push(succ);
            }
        }
        out
    }

    fn weakenings(&self) -> Vec<Small> {
        let box_list: Vec<usize> = bits(self.boxes).collect();
        let mut out = Vec::new();
        for succ in self.orders(false) {
            for pick in 0u64..1 << box_list.len() {
                let boxes = bits(pick).fold(0, |acc, k| acc | 1 << box_list[k]);
                out.push(Small { succ, boxes, ..*self });
            }
        }
        out
    }

    fn strengthenings(&self, extra_boxes: usize) -> Vec<Small> {
        let fresh: Vec<usize> = (1..1usize << self.n)
            .filter(|&b| self.boxes >> b & 1 == 0)
            .collect();
        let mut added = vec![0u64];
        let mut frontier = vec![(0usize, 0u64)];
        for _ in 0..extra_boxes {
            let mut next = Vec::new();
            for &(start, chosen) in &frontier {
                for (k, &b) in fresh.iter().enumerate().skip(start) {
                    let c = chosen | 1 << b;
                    added.push(c);
                    next.push((k + 1, c));
                }
            }
            frontier = next;
        }
        let mut out = Vec::new();
        for succ in self.orders(true) {
            for &extra in &added {
                out.push(Small {
                    succ,
                    boxes: self.boxes | extra,
                    ..*self
                });
            }
        }
        out
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..n {
            let mut perm = rest.clone();
            perm.insert(pos, n - 1);
            out.push(perm);
        }
    }
    out
}

struct OutOfWork;

/// Reusable oracle state.
pub struct Oracle {
    caps: OracleCaps,
    labels: Vec<Label>,
    perms: Vec<Vec<Vec<usize>>>,
    witnesses: HashMap<(Small, Relation), Rc<Vec<Small>>>,
    memo: HashMap<(Small, usize, Relation), bool>,
    work: u64,
}

impl Oracle {
    pub fn new(caps: OracleCaps) -> Oracle {
        assert!(
            caps.max_events <= ORACLE_MAX_EVENTS,
            "the oracle handles at most {ORACLE_MAX_EVENTS} events"
        );
        Oracle {
            caps,
            labels: Vec::new(),
            perms: (0..=ORACLE_MAX_EVENTS).map(permutations).collect(),
            witnesses: HashMap::default(),
            memo: HashMap::default(),
            work: 0,
        }
    }

    pub fn caps(&self) -> OracleCaps {
        self.caps
    }

    fn label_id(&mut self, l: &Label) -> u8 {
        match self.labels.iter().position(|k| k == l) {
            Some(i) => i as u8,
            None => {
                self.labels.push(l.clone());
                (self.labels.len() - 1) as u8
            }
        }
    }

    fn encode(&mut self, p: &Poset) -> Small {
        let mut s = Small::EMPTY;
        s.n = p.len() as u8;
        for e in 0..p.len() {
            s.labels[e] = self.label_id(p.label(e));
            s.succ[e] = p.successors(e).0 as u8;
        }
        for b in p.boxes() {
            s.boxes |= 1 << b.0;
        }
        s
    }

    pub fn check(
        &mut self,
        p: &Poset,
        phi: &Formula,
        relation: Relation,
    ) -> Result<OracleVerdict, LogicError> {
        check_fragment(phi, relation)?;
        if p.len() > self.caps.max_events {
            return Ok(OracleVerdict::Unknown);
        }
        let small = self.encode(p);
        // subformulas are memoised by address, valid for this call only
        self.memo.clear();
        self.witnesses.clear();
        self.work = 0;
        Ok(match self.eval(&small, phi, relation) {
            Ok(true) => OracleVerdict::True,
            Ok(false) => OracleVerdict::False,
            Err(OutOfWork) => OracleVerdict::Unknown,
        })
    }

    fn related_witnesses(&mut self, p: &Small, rel: Relation) -> Rc<Vec<Small>> {
        let extra = self.caps.extra_boxes;
        self.witnesses
            .entry((*p, rel))
            .or_insert_with(|| {
                Rc::new(match rel {
                    Relation::Iso => vec![*p],
                    Relation::Sub => p.weakenings(),
                    Relation::Rev => p.strengthenings(extra),
                })
            })
            .clone()
    }

    fn tick(&mut self) -> Result<(), OutOfWork> {
        self.work += 1;
        if self.work > self.caps.max_work {
            Err(OutOfWork)
        } else {
            Ok(())
        }
    }

    fn bijection(&self, src: &Small, tgt: &Small, exact: bool) -> bool {
        src.n == tgt.n
            && self.perms[src.n as usize]
                .iter()
                .any(|m| src.maps_onto(tgt, m, exact))
    }

    /// `R(p, q)`: `p ≅ q`, `p ⊑ q` (a morphism from `q` onto `p`), or `p ⊒ q`.
    fn related(&self, rel: Relation, p: &Small, q: &Small) -> bool {
        match rel {
            Relation::Iso => self.bijection(p, q, true),
            Relation::Sub => self.bijection(q, p, false),
            Relation::Rev => self.bijection(p, q, false),
        }
    }

    fn eval(&mut self, p: &Small, phi: &Formula, rel: Relation) -> Result<bool, OutOfWork> {
        let key = (*p, phi as *const Formula as usize, rel);
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        let v = match phi {
            Formula::Emp => self.related(rel, p, &Small::EMPTY),
            Formula::Atom(a) => {
                let atom = Small::atom(self.label_id(a));
                self.related(rel, p, &atom)
            }
            Formula::Neg(f) => !self.eval(p, f, rel)?,
            Formula::And(f, g) => self.eval(p, f, rel)? && self.eval(p, g, rel)?,
            Formula::Or(f, g) => self.eval(p, f, rel)? || self.eval(p, g, rel)?,
            Formula::SeqThen(f, g) => self.split(p, f, g, rel, true)?,
            Formula::ParNext(f, g) => self.split(p, f, g, rel, false)?,
            Formula::BoxMod(f) => self.boxed(p, f, rel)?,
            Formula::ContextMod(f) => self.context(p, f, rel)?,
        };
        self.memo.insert(key, v);
        Ok(v)
    }

    /// Some related witness decomposes as `Q|A ⨾ Q|Ā` (or `∥`) with the
    /// parts satisfying `f` and `g`.
    fn split(
        &mut self,
        p: &Small,
        f: &Formula,
        g: &Formula,
        rel: Relation,
        seq: bool,
    ) -> Result<bool, OutOfWork> {
        let ws = self.related_witnesses(p, rel);
        for q in ws.iter() {
            let n = q.n as usize;
            for a in 0..=q.all() {
                self.tick()?;
                let (left, right) = (q.restrict(a), q.restrict(q.all() & !a));
                let joined = left.join(&right, seq).expect("parts of a small poset");
                if !q.maps_onto(&joined, &split_map(a, n), true) {
                    continue;
                }
                if self.eval(&left, f, rel)? && self.eval(&right, g, rel)? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// Some related witness is `[Q']` with `Q' ⊨ f`. For a witness with the
    /// full box, `Q'` is either the witness minus that box or the witness
    /// itself; the empty witness is its own box.
    fn boxed(&mut self, p: &Small, f: &Formula, rel: Relation) -> Result<bool, OutOfWork> {
        let ws = self.related_witnesses(p, rel);
        let identity: Vec<usize> = (0..ORACLE_MAX_EVENTS).collect();
        for q in ws.iter() {
            self.tick()?;
            let inner = if q.n == 0 {
                vec![*q]
            } else if q.has_full_box() {
                vec![q.without_full_box(), *q]
            } else {
                Vec::new()
            };
            for r in inner {
                if q.maps_onto(&r.boxed(), &identity, true) && self.eval(&r, f, rel)? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    fn context(&mut self, p: &Small, f: &Formula, rel: Relation) -> Result<bool, OutOfWork> {
        let ws = self.related_witnesses(p, rel);
        for q in ws.iter() {
            for a in 0..=q.all() {
                self.tick()?;
                if self.eval(&q.restrict(a), f, rel)? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
}

/// One-shot oracle query with the given caps.
pub fn sat_oracle(
    p: &Poset,
    phi: &Formula,
    relation: Relation,
    caps: OracleCaps,
) -> Result<OracleVerdict, LogicError> {
    Oracle::new(caps).check(p, phi, relation)
}

/// Event `e` of the witness goes to its position in `A` (ascending) or after
/// all of `A`, at its position in the complement.
fn split_map(a: u8, n: usize) -> [usize; ORACLE_MAX_EVENTS] {
    let mut map = [0; ORACLE_MAX_EVENTS];
    let (mut inside, mut outside) = (0, a.count_ones() as usize);
    for (e, slot) in map.iter_mut().enumerate().take(n) {
        let next = if a >> e & 1 == 1 {
            &mut inside
        } else {
            &mut outside
        };
        *slot = *next;
        *next += 1;
    }
    map
}

#[cfg(test)]
mod tests {
    use super::super::parse_formula;
    use super::*;
    use crate::term::{interp_sp, parse_sp_term};

    fn pos(s: &str) -> Poset {
        interp_sp(&parse_sp_term(s).unwrap())
    }

    fn verdict(p: &str, f: &str, rel: Relation) -> OracleVerdict {
        sat_oracle(&pos(p), &parse_formula(f).unwrap(), rel, OracleCaps::default()).unwrap()
    }

    #[test]
    fn unit_satisfies_emp() {
        for rel in Relation::ALL {
            assert_eq!(verdict("1", "emp", rel), OracleVerdict::True);
        }
    }

    #[test]
    fn parallel_under_rev() {
        assert_eq!(verdict("a|b", "a||b", Relation::Rev), OracleVerdict::True);
        assert_eq!(verdict("a|b", "a|>b", Relation::Rev), OracleVerdict::True);
        assert_eq!(verdict("a;b", "a||b", Relation::Rev), OracleVerdict::False);
        assert_eq!(verdict("a;b", "a||b", Relation::Sub), OracleVerdict::True);
    }

    #[test]
    fn boxes() {
        assert_eq!(verdict("[a|b]", "a||b", Relation::Iso), OracleVerdict::False);
        assert_eq!(verdict("[a|b]", "[a||b]", Relation::Iso), OracleVerdict::True);
        assert_eq!(verdict("a;b", "[a|>b]", Relation::Rev), OracleVerdict::True);
        assert_eq!(verdict("[b|[c]]", "<>[<>c]", Relation::Sub), OracleVerdict::True);
        assert_eq!(verdict("a", "<>[<>c]", Relation::Sub), OracleVerdict::False);
    }

    #[test]
    fn caps_give_unknown() {
        assert_eq!(verdict("a|b|c|d|e", "emp", Relation::Iso), OracleVerdict::Unknown);
        let tiny = OracleCaps {
            max_work: 3,
            ..OracleCaps::default()
        };
        let v = sat_oracle(
            &pos("a|b|c"),
            &parse_formula("<>(a||c)").unwrap(),
            Relation::Sub,
            tiny,
        )
        .unwrap();
        assert_eq!(v, OracleVerdict::Unknown);
    }

    #[test]
    fn packed_operations() {
        let mut o = Oracle::new(OracleCaps::default());
        let ab = o.encode(&pos("a;b"));
        let par = o.encode(&pos("a|b"));
        assert!(o.related(Relation::Sub, &ab, &par));
        assert!(!o.related(Relation::Sub, &par, &ab));
        assert!(o.related(Relation::Rev, &par, &ab));
        let ba = o.encode(&pos("b|a"));
        assert!(o.related(Relation::Iso, &par, &ba));
        let (boxed, plain) = (o.encode(&pos("[a]")), o.encode(&pos("a")));
        assert!(!o.related(Relation::Iso, &boxed, &plain));
        let abc = o.encode(&pos("[a;b];c"));
        assert_eq!(abc.restrict(0b011), o.encode(&pos("[a;b]")));
        assert_eq!(abc.restrict(0b101), o.encode(&pos("a;c")));
        let c = o.encode(&pos("c"));
        assert_eq!(ab.join(&c, true), Some(o.encode(&pos("a;b;c"))));
        // 19 orders on three events
        assert_eq!(o.encode(&pos("a|b|c")).orders(true).len(), 19);
        assert_eq!(split_map(0b1010, 4)[..4], [2, 0, 3, 1]);
    }
}
