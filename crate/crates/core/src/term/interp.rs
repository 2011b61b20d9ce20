//! Interpretation of terms into posets and sets of posets.

use crate::poset::{EventSet, Poset, PosetError, PosetSet, MAX_EVENTS};

use super::{SpTerm, Term};

/// The poset of a series-parallel term. The left operand of `;` and `|`
/// occupies the lower event ids, so events are numbered by the left-to-right
/// order of the atoms in the term.
///
/// Panics when the term has more than [`MAX_EVENTS`] atoms.
pub fn interp_sp(s: &SpTerm) -> Poset {
    assert!(
        s.event_count() <= MAX_EVENTS,
        "term has {} atoms; at most {MAX_EVENTS} are supported",
        s.event_count()
    );
    match s {
        SpTerm::One => Poset::unit(),
        SpTerm::Atom(a) => Poset::atom(a.clone()),
        SpTerm::Seq(a, b) => interp_sp(a).seq(&interp_sp(b)),
        SpTerm::Par(a, b) => interp_sp(a).par(&interp_sp(b)),
        SpTerm::Box(a) => interp_sp(a).boxed(),
    }
}

fn product(a: &PosetSet, b: &PosetSet, f: impl Fn(&Poset, &Poset) -> Poset) -> PosetSet {
    let mut out = PosetSet::new();
    for p in a {
        for q in b {
            out.insert(f(p, q));
        }
    }
    out
}

/// The set of posets of a term, deduplicated up to isomorphism.
pub fn interp(e: &Term) -> PosetSet {
    match e {
        Term::Zero => PosetSet::new(),
        Term::One => [Poset::unit()].into_iter().collect(),
        Term::Atom(a) => [Poset::atom(a.clone())].into_iter().collect(),
        Term::Seq(a, b) => product(&interp(a), &interp(b), Poset::seq),
        Term::Par(a, b) => product(&interp(a), &interp(b), Poset::par),
        Term::Join(a, b) => {
            let mut out = interp(a);
            for p in interp(b).into_vec() {
                out.insert(p);
            }
            out
        }
        Term::Box(a) => interp(a).iter().map(Poset::boxed).collect(),
    }
}

/// The series-parallel terms whose interpretations make up `interp(e)`.
/// Syntactic duplicates are kept.
pub fn expand(e: &Term) -> Vec<SpTerm> {
    let pairs = |a: &Term, b: &Term, f: fn(SpTerm, SpTerm) -> SpTerm| {
        let right = expand(b);
        expand(a)
            .into_iter()
            .flat_map(|s| right.iter().map(move |t| f(s.clone(), t.clone())))
            .collect()
    };
    match e {
        Term::Zero => Vec::new(),
        Term::One => vec![SpTerm::One],
        Term::Atom(a) => vec![SpTerm::Atom(a.clone())],
        Term::Seq(a, b) => pairs(a, b, SpTerm::seq),
        Term::Par(a, b) => pairs(a, b, SpTerm::par),
        Term::Join(a, b) => {
            let mut out = expand(a);
            out.extend(expand(b));
            out
        }
        Term::Box(a) => expand(a).into_iter().map(SpTerm::boxed).collect(),
    }
}

/// The subterm of `s` covering exactly the events `a` of `interp_sp(s)`.
/// A box survives only when all of its events are kept.
pub fn syntactic_restrict(s: &SpTerm, a: EventSet) -> Result<SpTerm, PosetError> {
    let n = s.event_count();
    if n > MAX_EVENTS {
        return Err(PosetError::TooManyEvents(n));
    }
    if !a.is_subset(EventSet::full(n)) {
        return Err(PosetError::OutOfDomain(a, n));
    }
    Ok(restrict_at(s, a, 0))
}

/// `a` is expressed in the ids of the enclosing term; `s` starts at `offset`.
fn restrict_at(s: &SpTerm, a: EventSet, offset: usize) -> SpTerm {
    match s {
        SpTerm::One => SpTerm::One,
        SpTerm::Atom(l) => {
            if a.contains(offset) {
                SpTerm::Atom(l.clone())
            } else {
                SpTerm::One
            }
        }
        SpTerm::Seq(l, r) | SpTerm::Par(l, r) => {
            let split = offset + l.event_count();
            let left = restrict_at(l, a, offset);
            let right = restrict_at(r, a, split);
            if matches!(s, SpTerm::Seq(..)) {
                left.seq(right)
            } else {
                left.par(right)
            }
        }
        SpTerm::Box(inner) => {
            let own = EventSet::full(inner.event_count()).shift(offset);
            if own.is_subset(a) {
                s.clone()
            } else {
                restrict_at(inner, a, offset)
            }
        }
    }
}

/// For a term whose poset carries the full box, a term `t` with `[t]` equal
/// to `s` whose own poset does not. Event-free terms give `1`, since `[1] = 1`.
/// Returns `None` when the poset of `s` is non-empty and lacks the full box.
pub fn strip_outer_box(s: &SpTerm) -> Option<SpTerm> {
    if s.event_count() == 0 {
        return Some(SpTerm::One);
    }
    if !interp_sp(s).has_full_box() {
        return None;
    }
    strip(s)
}

fn strip(s: &SpTerm) -> Option<SpTerm> {
    match s {
        SpTerm::One | SpTerm::Atom(_) => None,
        SpTerm::Box(inner) => {
            if inner.event_count() > 0 && interp_sp(inner).has_full_box() {
                strip(inner)
            } else {
                Some((**inner).clone())
            }
        }
        // one side has no events, so the box belongs to the other
        SpTerm::Seq(a, b) | SpTerm::Par(a, b) => {
            if a.event_count() == 0 {
                strip(b)
            } else {
                strip(a)
            }
        }
    }
}
