//! Property tests over generated posets, terms and formulas. Values come
//! from the seeded generators so failures replay from the printed seed.

mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pomsets::logic::{
    parse_formula, phi_of_sp, render_formula, sat, sat_set, Formula, ModelChecker, Quantifier, Relation,
    SatMode,
};
use pomsets::poset::{
    canonical_key, factorize_subsumption, find_homomorphism, iso, strengthenings, subsumed_by, weakenings,
    EventSet, HomMode, Poset, SplitMode,
};
use pomsets::term::{
    decide, expand, interp, interp_sp, parse_term, render_term, set_rel, sp_check, strip_outer_box,
    syntactic_restrict, synthesize_term, AxiomSystem, Query, SetRelation, SpTerm, Term,
};
use pomsets::testkit::{GenConfig, Generator};

use common::{mutate, shuffled};

fn gen_with(seed: u64, max_events: usize) -> Generator {
    Generator::new(GenConfig {
        seed,
        max_events,
        ..GenConfig::default()
    })
}

fn keys(ps: &[Poset]) -> std::collections::BTreeSet<String> {
    ps.iter().map(|p| format!("{:?}", canonical_key(p))).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn generated_posets_are_well_formed(seed in any::<u64>()) {
        let p = gen_with(seed, 6).poset();
        prop_assert!(p.check_invariants().is_ok());
        prop_assert!(p.seq(&Poset::unit()).check_invariants().is_ok());
        prop_assert!(p.par(&p).boxed().check_invariants().is_ok());
    }

    #[test]
    fn iso_is_an_equivalence(seed in any::<u64>()) {
        let mut g = gen_with(seed, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = g.poset();
        let q = shuffled(&p, &mut rng);
        let r = shuffled(&q, &mut rng);
        prop_assert!(iso(&p, &p) && iso(&p, &q) && iso(&q, &p) && iso(&p, &r));
        prop_assert_eq!(canonical_key(&p), canonical_key(&r));
    }

    #[test]
    fn subsumption_is_a_partial_order(seed in any::<u64>()) {
        let mut g = gen_with(seed, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = g.poset();
        prop_assert!(subsumed_by(&p, &p));
        let ws = weakenings(&p);
        let q = &ws[rng.gen_range(0..ws.len())];
        let wq = weakenings(q);
        let r = &wq[rng.gen_range(0..wq.len())];
        prop_assert!(subsumed_by(&p, q) && subsumed_by(q, r) && subsumed_by(&p, r));
        if subsumed_by(q, &p) {
            prop_assert!(iso(&p, q));
        }
    }

    #[test]
    fn splits_match_explicit_isomorphism(seed in any::<u64>()) {
        let mut g = gen_with(seed, 5);
        let p = g.poset();
        let mask = if p.is_empty() { 0 } else { g.rng().gen_range(0..1u64 << p.len()) };
        let a = EventSet(mask);
        let rest = a.complement(p.len());
        let (pa, pr) = (p.restrict(a).unwrap(), p.restrict(rest).unwrap());
        prop_assert_eq!(p.split_check(a, SplitMode::Seq).unwrap(), iso(&p, &pa.seq(&pr)));
        prop_assert_eq!(p.split_check(a, SplitMode::Par).unwrap(), iso(&p, &pa.par(&pr)));
    }

    #[test]
    fn factorisation_witnesses(seed in any::<u64>()) {
        let mut g = gen_with(seed, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = g.poset();
        let ws = weakenings(&p);
        let q = shuffled(&ws[rng.gen_range(0..ws.len())], &mut rng);
        let (r1, r2) = factorize_subsumption(&p, &q).expect("p is below its weakenings");
        prop_assert!(find_homomorphism(&r1, &p, HomMode::BoxReflecting).is_some());
        prop_assert!(find_homomorphism(&q, &r1, HomMode::OrderReflecting).is_some());
        prop_assert!(find_homomorphism(&r2, &p, HomMode::OrderReflecting).is_some());
        prop_assert!(find_homomorphism(&q, &r2, HomMode::BoxReflecting).is_some());
    }

    #[test]
    fn unit_is_only_below_itself(seed in any::<u64>()) {
        let p = gen_with(seed, 4).poset();
        let unit = Poset::unit();
        let a = subsumed_by(&p, &unit);
        prop_assert_eq!(a, iso(&p, &unit));
        prop_assert_eq!(a, subsumed_by(&unit, &p));
    }

    #[test]
    fn interpretations_are_series_parallel(seed in any::<u64>()) {
        let s = gen_with(seed, 4).sp_term();
        let p = interp_sp(&s);
        prop_assert!(sp_check(&p).is_none());
        let t = synthesize_term(&p).expect("series-parallel");
        prop_assert!(decide(AxiomSystem::Bsp, &s.into(), &t.into(), Query::Eq).unwrap());
    }

    #[test]
    fn pattern_witnesses_validate(seed in any::<u64>()) {
        let p = gen_with(seed, 6).poset();
        match sp_check(&p) {
            Some(w) => {
                prop_assert!(w.validate(&p));
                prop_assert!(synthesize_term(&p).is_none());
            }
            None => prop_assert!(iso(&interp_sp(&synthesize_term(&p).unwrap()), &p)),
        }
    }

    #[test]
    fn expansion_is_coherent(seed in any::<u64>()) {
        let e = gen_with(seed, 4).term();
        let terms = expand(&e);
        let mut from_terms = pomsets::poset::PosetSet::new();
        for s in &terms {
            from_terms.insert(interp_sp(s));
        }
        prop_assert!(set_rel(&interp(&e), &from_terms, SetRelation::IsoEq));
        if let Some(joined) = terms.iter().cloned().map(Term::from).reduce(Term::join) {
            prop_assert!(decide(AxiomSystem::Bsr, &joined, &e, Query::Eq).unwrap());
        }
    }

    #[test]
    fn subsumption_decision_matches_homomorphisms(seed in any::<u64>()) {
        let mut g = gen_with(seed, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = g.sp_term();
        let t = mutate(&mutate(&s, &mut rng), &mut rng);
        let hom = find_homomorphism(&interp_sp(&t), &interp_sp(&s), HomMode::Any).is_some();
        prop_assert_eq!(decide(AxiomSystem::Cmb, &s.into(), &t.into(), Query::Leq).unwrap(), hom);
    }

    #[test]
    fn rendering_round_trips(seed in any::<u64>()) {
        let mut g = gen_with(seed, 4);
        let e = g.term();
        prop_assert_eq!(parse_term(&render_term(&e)).unwrap(), e);
        let phi = g.formula(false);
        prop_assert_eq!(parse_formula(&render_formula(&phi)).unwrap(), phi);
    }

    #[test]
    fn syntactic_restriction_follows_restriction(seed in any::<u64>()) {
        let mut g = gen_with(seed, 4);
        let s = g.sp_term();
        let p = interp_sp(&s);
        let mask = if p.is_empty() { 0 } else { g.rng().gen_range(0..1u64 << p.len()) };
        let r = syntactic_restrict(&s, EventSet(mask)).unwrap();
        prop_assert!(iso(&interp_sp(&r), &p.restrict(EventSet(mask)).unwrap()));
    }

    #[test]
    fn stripping_the_outer_box(seed in any::<u64>()) {
        let s = gen_with(seed, 4).sp_term();
        let p = interp_sp(&s);
        match strip_outer_box(&s) {
            Some(t) if p.is_empty() => prop_assert_eq!(t, SpTerm::One),
            Some(t) => {
                let q = interp_sp(&t);
                prop_assert!(p.has_full_box() && !q.has_full_box());
                prop_assert!(iso(&q.boxed(), &p));
            }
            None => prop_assert!(!p.has_full_box()),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Every poset above `p` is found by direct search among all posets on
    /// the same labels.
    #[test]
    fn weakenings_are_complete(seed in any::<u64>()) {
        let p = gen_with(seed, 3).poset();
        let antichain = Poset::from_parts(p.labels().to_vec(), [], []).unwrap();
        let above: Vec<Poset> = strengthenings(&antichain, p.boxes().len())
            .into_iter()
            .filter(|q| subsumed_by(&p, q))
            .collect();
        prop_assert_eq!(keys(&weakenings(&p)), keys(&above));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn formulas_of_terms_characterise_their_poset(seed in any::<u64>()) {
        let mut g = gen_with(seed, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = g.sp_term();
        let target = interp_sp(&s);
        prop_assume!(target.len() <= 5);
        let p = if rng.gen_bool(0.5) { interp_sp(&mutate(&s, &mut rng)) } else { g.poset() };
        prop_assume!(p.len() <= 5);
        let phi = phi_of_sp(&s);
        prop_assert_eq!(sat(&p, &phi, Relation::Iso).unwrap().holds, iso(&p, &target));
        prop_assert_eq!(sat(&p, &phi, Relation::Sub).unwrap().holds, subsumed_by(&p, &target));
        prop_assert_eq!(sat(&p, &phi, Relation::Rev).unwrap().holds, subsumed_by(&target, &p));
    }

    #[test]
    fn satisfaction_extends_with_the_relation(seed in any::<u64>()) {
        let mut g = gen_with(seed, 4);
        let p = g.poset();
        let phi = g.formula(true);
        let mut mc = ModelChecker::new();
        if mc.holds(&p, &phi, Relation::Iso).unwrap() {
            prop_assert!(mc.holds(&p, &phi, Relation::Sub).unwrap());
            prop_assert!(mc.holds(&p, &phi, Relation::Rev).unwrap());
        }
    }

    #[test]
    fn satisfaction_is_invariant_under_iso(seed in any::<u64>()) {
        let mut g = gen_with(seed, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = g.poset();
        let q = shuffled(&p, &mut rng);
        let phi = g.formula(false);
        prop_assert_eq!(sat(&p, &phi, Relation::Iso).unwrap().holds, sat(&q, &phi, Relation::Iso).unwrap().holds);
    }

    #[test]
    fn positive_witnesses_replay(seed in any::<u64>()) {
        let mut g = gen_with(seed, 4);
        let p = g.poset();
        for rel in Relation::ALL {
            let phi = g.formula(rel != Relation::Iso);
            let res = sat(&p, &phi, rel).unwrap();
            if res.holds {
                prop_assert!(res.replay(&p, &phi, rel));
            }
        }
    }

    #[test]
    fn emp_holds_only_on_the_empty_poset(seed in any::<u64>()) {
        let p = gen_with(seed, 3).poset();
        for rel in Relation::ALL {
            prop_assert_eq!(sat(&p, &Formula::Emp, rel).unwrap().holds, p.is_empty());
        }
    }

    /// Growing a set of runs can only help existential and hurt universal
    /// satisfaction.
    #[test]
    fn set_satisfaction_is_monotone(seed in any::<u64>()) {
        let mut g = gen_with(seed, 3);
        g.cfg.term_depth = 2;
        let e = g.term();
        let f = e.clone().join(g.term());
        let (small, large) = (interp(&e), interp(&f));
        prop_assert!(set_rel(&small, &large, SetRelation::IsoIncl));
        for rel in [Relation::Iso, Relation::Sub] {
            let phi = g.formula(rel != Relation::Iso);
            let q = |set, q| sat_set(set, &phi, SatMode::new(rel, q)).unwrap();
            if q(&small, Quantifier::Some) {
                prop_assert!(q(&large, Quantifier::Some));
            }
            if q(&large, Quantifier::All) {
                prop_assert!(q(&small, Quantifier::All));
            }
        }
    }

    /// Equal terms cannot be told apart by formulas, and each term's own
    /// formula singles out exactly the terms equal to it.
    #[test]
    fn adequacy(seed in any::<u64>()) {
        let mut g = gen_with(seed, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = g.sp_term();
        let t: SpTerm = mutate(&s, &mut rng);
        let (p, q) = (interp_sp(&s), interp_sp(&t));
        prop_assume!(p.len() <= 6);
        let equal = decide(AxiomSystem::Bsp, &s.clone().into(), &t.clone().into(), Query::Eq).unwrap();
        prop_assert_eq!(sat(&p, &phi_of_sp(&t), Relation::Iso).unwrap().holds, equal);
        if equal {
            for _ in 0..4 {
                let phi = g.formula(false);
                prop_assert_eq!(sat(&p, &phi, Relation::Iso).unwrap().holds, sat(&q, &phi, Relation::Iso).unwrap().holds);
            }
        }
    }
}
