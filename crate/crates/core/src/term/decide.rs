//! Decision procedures for the four axiom systems, by comparing
//! interpretations.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::poset::{find_homomorphism, HomMode, Morphism, PosetSet};

use super::{interp, interp_sp, SpTerm, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AxiomSystem {
    /// Bimonoid with boxes: equality up to isomorphism.
    Bsp,
    /// Concurrent monoid with boxes: adds exchange and `[s] ≤ s`.
    Cmb,
    /// Bisemiring with boxes: adds `0` and `+`.
    Bsr,
    /// Concurrent semiring with boxes.
    Csrb,
}

impl AxiomSystem {
    pub const ALL: [AxiomSystem; 4] = [
        AxiomSystem::Bsp,
        AxiomSystem::Cmb,
        AxiomSystem::Bsr,
        AxiomSystem::Csrb,
    ];

    /// Whether the system only covers series-parallel terms.
    pub fn sp_only(self) -> bool {
        matches!(self, AxiomSystem::Bsp | AxiomSystem::Cmb)
    }
}

impl FromStr for AxiomSystem {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bsp" => Ok(AxiomSystem::Bsp),
            "cmb" => Ok(AxiomSystem::Cmb),
            "bsr" => Ok(AxiomSystem::Bsr),
            "csrb" => Ok(AxiomSystem::Csrb),
            other => Err(format!("unknown axiom system {other:?}")),
        }
    }
}

impl fmt::Display for AxiomSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            AxiomSystem::Bsp => "bsp",
            AxiomSystem::Cmb => "cmb",
            AxiomSystem::Bsr => "bsr",
            AxiomSystem::Csrb => "csrb",
        };
        f.write_str(name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Query {
    Eq,
    Leq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SetRelation {
    /// Every member of the left set is isomorphic to a member of the right.
    IsoIncl,
    IsoEq,
    /// Every member of the left set is subsumed by a member of the right.
    Subsume,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecideError {
    #[error("{system} only covers series-parallel terms; {side} side uses 0 or +")]
    Fragment { system: AxiomSystem, side: &'static str },
}

/// Outcome of [`decide_with_witness`]. For the series-parallel systems the
/// witnesses are the homomorphisms that justify a positive answer.
#[derive(Clone, Debug, Serialize)]
pub struct Decision {
    pub result: bool,
    pub witness: Vec<Morphism>,
}

pub fn set_rel(a: &PosetSet, b: &PosetSet, rel: SetRelation) -> bool {
    match rel {
        SetRelation::IsoIncl => a.iter().all(|p| b.contains(p)),
        SetRelation::IsoEq => a.len() == b.len() && set_rel(a, b, SetRelation::IsoIncl),
        SetRelation::Subsume => a
            .iter()
            .all(|p| b.iter().any(|q| find_homomorphism(q, p, HomMode::Any).is_some())),
    }
}

fn sp_side(system: AxiomSystem, t: &Term, side: &'static str) -> Result<SpTerm, DecideError> {
    t.to_sp().ok_or(DecideError::Fragment { system, side })
}

/// Whether `system ⊢ lhs = rhs` (or `≤`), decided through the
/// interpretations. In the two semiring systems `e ≤ f` means `e + f = f`.
/// The bimonoid has no proper inequations, so `≤` there coincides with `=`.
pub fn decide(system: AxiomSystem, lhs: &Term, rhs: &Term, query: Query) -> Result<bool, DecideError> {
    decide_with_witness(system, lhs, rhs, query).map(|d| d.result)
}

pub fn decide_with_witness(
    system: AxiomSystem,
    lhs: &Term,
    rhs: &Term,
    query: Query,
) -> Result<Decision, DecideError> {
    if system.sp_only() {
        let (s, t) = (sp_side(system, lhs, "left")?, sp_side(system, rhs, "right")?);
        let (p, q) = (interp_sp(&s), interp_sp(&t));
        let witness = match (system, query) {
            (AxiomSystem::Bsp, _) => find_homomorphism(&p, &q, HomMode::Iso).into_iter().collect(),
            (_, Query::Leq) => find_homomorphism(&q, &p, HomMode::Any).into_iter().collect(),
            (_, Query::Eq) => {
                match (
                    find_homomorphism(&q, &p, HomMode::Any),
                    find_homomorphism(&p, &q, HomMode::Any),
                ) {
                    (Some(a), Some(b)) => vec![a, b],
                    _ => Vec::new(),
                }
            }
        };
        return Ok(Decision {
            result: !witness.is_empty(),
            witness,
        });
    }
    let (a, b) = (interp(lhs), interp(rhs));
    let result = match (system, query) {
        (AxiomSystem::Bsr, Query::Eq) => set_rel(&a, &b, SetRelation::IsoEq),
        (AxiomSystem::Bsr, Query::Leq) => set_rel(&a, &b, SetRelation::IsoIncl),
        (_, Query::Leq) => set_rel(&a, &b, SetRelation::Subsume),
        (_, Query::Eq) => set_rel(&a, &b, SetRelation::Subsume) && set_rel(&b, &a, SetRelation::Subsume),
    };
    Ok(Decision {
        result,
        witness: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::super::parse_term;
    use super::*;

    fn d(sys: AxiomSystem, l: &str, r: &str, q: Query) -> bool {
        decide(sys, &parse_term(l).unwrap(), &parse_term(r).unwrap(), q).unwrap()
    }

    #[test]
    fn bimonoid() {
        assert!(d(AxiomSystem::Bsp, "1;a", "a", Query::Eq));
        assert!(d(AxiomSystem::Bsp, "a|b", "b|a", Query::Eq));
        assert!(!d(AxiomSystem::Bsp, "a;b", "b;a", Query::Eq));
        assert!(!d(AxiomSystem::Bsp, "[a]", "a", Query::Leq));
        let err = decide(
            AxiomSystem::Bsp,
            &parse_term("a+b").unwrap(),
            &parse_term("a").unwrap(),
            Query::Eq,
        );
        assert!(matches!(err, Err(DecideError::Fragment { .. })));
    }

    #[test]
    fn concurrent_monoid() {
        assert!(d(AxiomSystem::Cmb, "[a;b]", "a;b", Query::Leq));
        assert!(!d(AxiomSystem::Cmb, "a;b", "[a;b]", Query::Leq));
        assert!(d(AxiomSystem::Cmb, "(a|b);(c|d)", "a;c|b;d", Query::Leq));
        assert!(!d(AxiomSystem::Cmb, "(a|b);(c|d)", "a;c|b;d", Query::Eq));
        assert!(d(AxiomSystem::Cmb, "[[a]]", "[a]", Query::Eq));
    }

    #[test]
    fn semirings() {
        assert!(d(AxiomSystem::Bsr, "a;(b+c)", "a;b+a;c", Query::Eq));
        assert!(d(AxiomSystem::Bsr, "a", "a+b", Query::Leq));
        assert!(!d(AxiomSystem::Bsr, "a;b", "a|b", Query::Leq));
        assert!(d(AxiomSystem::Csrb, "a;b", "a|b", Query::Leq));
        assert!(d(
            AxiomSystem::Csrb,
            "(a|b);(c|d) + a;c|b;d",
            "a;c|b;d",
            Query::Eq
        ));
        assert!(!d(
            AxiomSystem::Bsr,
            "(a|b);(c|d) + a;c|b;d",
            "a;c|b;d",
            Query::Eq
        ));
        assert!(d(AxiomSystem::Csrb, "0", "a", Query::Leq));
        assert!(!d(AxiomSystem::Csrb, "a", "0", Query::Leq));
    }

    #[test]
    fn set_relations() {
        let a = interp(&parse_term("a;b").unwrap());
        let b = interp(&parse_term("a|b").unwrap());
        assert!(set_rel(&a, &b, SetRelation::Subsume));
        assert!(!set_rel(&b, &a, SetRelation::Subsume));
        assert!(!set_rel(&a, &b, SetRelation::IsoIncl));
    }
}
