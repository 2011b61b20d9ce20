//! Set-level satisfaction, formulas of terms, independence and the frame
//! rules.

use serde::Serialize;

use crate::poset::{Label, Poset, PosetSet};
use crate::term::{expand, interp, SpTerm, Term};

use super::{check_fragment, Formula, LogicError, ModelChecker, Quantifier, Relation, SatMode};

/// Whether every (`All`) or some (`Some`) member of `set` satisfies `phi`.
pub fn sat_set(set: &PosetSet, phi: &Formula, mode: SatMode) -> Result<bool, LogicError> {
    check_fragment(phi, mode.relation)?;
    let mut mc = ModelChecker::new();
    let mut member = |p: &Poset| mc.holds(p, phi, mode.relation).expect("fragment already checked");
    Ok(match mode.quantifier {
        Quantifier::All => set.iter().all(&mut member),
        Quantifier::Some => set.iter().any(&mut member),
    })
}

pub fn sat_set_term(term: &Term, phi: &Formula, mode: SatMode) -> Result<bool, LogicError> {
    sat_set(&interp(term), phi, mode)
}

/// The formula describing exactly the poset of `s`.
pub fn phi_of_sp(s: &SpTerm) -> Formula {
    match s {
        SpTerm::One => Formula::Emp,
        SpTerm::Atom(a) => Formula::Atom(a.clone()),
        SpTerm::Seq(a, b) => phi_of_sp(a).then(phi_of_sp(b)),
        SpTerm::Par(a, b) => phi_of_sp(a).next(phi_of_sp(b)),
        SpTerm::Box(a) => phi_of_sp(a).boxed(),
    }
}

/// The disjunction of [`phi_of_sp`] over the expansion of `e`.
pub fn phi_of_term(e: &Term) -> Result<Formula, LogicError> {
    Formula::or_all(expand(e).iter().map(phi_of_sp)).ok_or(LogicError::EmptyDisjunction)
}

/// `p` has no sub-run that is a box satisfying `phi`.
pub fn independent(p: &Poset, phi: &Formula, relation: Relation) -> Result<bool, LogicError> {
    let probe = phi.clone().boxed().context();
    Ok(!ModelChecker::new().holds(p, &probe, relation)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameShape {
    /// `P ∥ Q ⊨ ψ ∥ [φ]`
    Par,
    /// `P ⨾ Q ⊨ ψ ▷ [φ]`
    SeqSuffix,
    /// `Q ⨾ P ⊨ [φ] ▷ ψ`
    SeqPrefix,
}

impl FrameShape {
    pub const ALL: [FrameShape; 3] = [FrameShape::Par, FrameShape::SeqSuffix, FrameShape::SeqPrefix];

    pub fn compose(self, p: &Poset, q: &Poset) -> Poset {
        match self {
            FrameShape::Par => p.par(q),
            FrameShape::SeqSuffix => p.seq(q),
            FrameShape::SeqPrefix => q.seq(p),
        }
    }

    pub fn combine(self, psi: &Formula, phi: &Formula) -> Formula {
        let framed = phi.clone().boxed();
        match self {
            FrameShape::Par => psi.clone().next(framed),
            FrameShape::SeqSuffix => psi.clone().then(framed),
            FrameShape::SeqPrefix => framed.then(psi.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrameReport {
    pub shape: FrameShape,
    pub relation: Relation,
    /// `P` is independent of `φ`.
    pub independent: bool,
    /// `Q ⊨ [φ]`.
    pub frame_boxed: bool,
    /// `P ⊨ ψ`.
    pub local: bool,
    /// The composed run satisfies the composed formula.
    pub composed: bool,
}

impl FrameReport {
    pub fn preconditions(&self) -> bool {
        self.independent && self.frame_boxed
    }

    /// `local ⇒ composed`.
    pub fn forward(&self) -> bool {
        !self.local || self.composed
    }

    /// `composed ⇒ local`.
    pub fn backward(&self) -> bool {
        !self.composed || self.local
    }

    pub fn biconditional(&self) -> bool {
        self.local == self.composed
    }
}

/// Evaluates one frame rule instance. Nothing is assumed: the report records
/// the preconditions next to both sides of the biconditional.
pub fn frame_check(
    p: &Poset,
    q: &Poset,
    phi: &Formula,
    psi: &Formula,
    shape: FrameShape,
    relation: Relation,
) -> Result<FrameReport, LogicError> {
    check_fragment(phi, relation)?;
    check_fragment(psi, relation)?;
    let mut mc = ModelChecker::new();
    let boxed = phi.clone().boxed();
    Ok(FrameReport {
        shape,
        relation,
        independent: !mc.holds(p, &boxed.clone().context(), relation)?,
        frame_boxed: mc.holds(q, &boxed, relation)?,
        local: mc.holds(p, psi, relation)?,
        composed: mc.holds(&shape.compose(p, q), &shape.combine(psi, phi), relation)?,
    })
}

/// Replaces atoms by formulas; atoms without an image stay.
pub fn substitute_formula(phi: &Formula, tau: &dyn Fn(&Label) -> Option<Formula>) -> Formula {
    let go = |f: &Formula| Box::new(substitute_formula(f, tau));
    match phi {
        Formula::Emp => Formula::Emp,
        Formula::Atom(a) => tau(a).unwrap_or_else(|| phi.clone()),
        Formula::And(a, b) => Formula::And(go(a), go(b)),
        Formula::Or(a, b) => Formula::Or(go(a), go(b)),
        Formula::Neg(a) => Formula::Neg(go(a)),
        Formula::SeqThen(a, b) => Formula::SeqThen(go(a), go(b)),
        Formula::ParNext(a, b) => Formula::ParNext(go(a), go(b)),
        Formula::BoxMod(a) => Formula::BoxMod(go(a)),
        Formula::ContextMod(a) => Formula::ContextMod(go(a)),
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_formula;
    use super::*;
    use crate::term::{interp_sp, parse_sp_term, parse_term};

    fn pos(s: &str) -> Poset {
        interp_sp(&parse_sp_term(s).unwrap())
    }

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn term_formulas() {
        assert_eq!(phi_of_sp(&parse_sp_term("a;(b|c)").unwrap()), f("a |> (b || c)"));
        assert_eq!(phi_of_term(&parse_term("a+b").unwrap()).unwrap(), f("a \\/ b"));
        assert_eq!(phi_of_term(&Term::Zero), Err(LogicError::EmptyDisjunction));
    }

    #[test]
    fn empty_set() {
        let empty = interp(&Term::Zero);
        let phi = f("a");
        assert!(sat_set(&empty, &phi, SatMode::new(Relation::Iso, Quantifier::All)).unwrap());
        assert!(!sat_set(&empty, &phi, SatMode::new(Relation::Iso, Quantifier::Some)).unwrap());
    }

    #[test]
    fn remark_counterexamples() {
        let r = frame_check(
            &pos("a"),
            &pos("[b|[c]]"),
            &f("<>c"),
            &f("a||b"),
            FrameShape::Par,
            Relation::Sub,
        )
        .unwrap();
        assert!(r.preconditions() && r.forward() && !r.backward());
        let r = frame_check(
            &pos("a|b"),
            &pos("c"),
            &f("<>c"),
            &f("a"),
            FrameShape::Par,
            Relation::Rev,
        )
        .unwrap();
        assert!(r.preconditions() && r.forward() && !r.backward());
        assert!(!independent(&pos("[b|[c]]"), &f("<>c"), Relation::Sub).unwrap());
    }

    #[test]
    fn substitution() {
        let tau = |l: &Label| (l.as_str() == "x").then(|| f("a \\/ b"));
        assert_eq!(substitute_formula(&f("x|>x"), &tau), f("(a \\/ b) |> (a \\/ b)"));
        assert_eq!(substitute_formula(&f("<>y"), &tau), f("<>y"));
    }
}
