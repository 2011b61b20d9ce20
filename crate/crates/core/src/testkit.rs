//! Seeded random generators and the differential harness that compares the
//! model checker with the brute-force oracle.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::logic::{
    parse_formula, Fault, Formula, ModelChecker, Oracle, OracleCaps, OracleVerdict, Relation,
};
use crate::poset::{EventSet, Label, Poset, PosetJson};
use crate::term::{SpTerm, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenConfig {
    pub max_events: usize,
    pub max_box_attempts: usize,
    pub alphabet_size: usize,
    pub term_depth: usize,
    pub formula_depth: usize,
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> GenConfig {
        GenConfig {
            max_events: 4,
            max_box_attempts: 2,
            alphabet_size: 3,
            term_depth: 3,
            formula_depth: 3,
            seed: 0,
        }
    }
}

/// A deterministic stream of random values drawn according to a [`GenConfig`].
pub struct Generator {
    pub cfg: GenConfig,
    rng: ChaCha8Rng,
}

impl Generator {
    pub fn new(cfg: GenConfig) -> Generator {
        Generator {
            cfg,
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn label(&mut self) -> Label {
        let k = self.rng.gen_range(0..self.cfg.alphabet_size.max(1));
        Label::from(alphabet(k).as_str())
    }

    pub fn poset(&mut self) -> Poset {
        let n = self.rng.gen_range(0..=self.cfg.max_events);
        self.poset_with(n)
    }

    /// A random poset on exactly `n` events.
    pub fn poset_with(&mut self, n: usize) -> Poset {
        let labels: Vec<Label> = (0..n).map(|_| self.label()).collect();
        // edges follow a random topological order
        let mut topo: Vec<usize> = (0..n).collect();
        topo.shuffle(&mut self.rng);
        let density = self.rng.gen_range(0.0..0.7);
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.rng.gen_bool(density) {
                    edges.push((topo[i], topo[j]));
                }
            }
        }
        let order = Poset::from_parts(labels.clone(), edges.iter().copied(), [])
            .expect("edges follow a topological order");
        let mut boxes = Vec::new();
        if n > 0 {
            for _ in 0..self.cfg.max_box_attempts {
                if self.rng.gen_bool(0.5) {
                    boxes.push(self.box_over(&order));
                }
            }
        }
        Poset::from_parts(labels, edges, boxes).expect("generated poset is well formed")
    }

    /// Mostly order-convex sets, which tend to keep the poset series-parallel,
    /// and occasionally an arbitrary set.
    fn box_over(&mut self, p: &Poset) -> EventSet {
        let n = p.len();
        if self.rng.gen_bool(0.4) {
            let bits = self.rng.gen_range(1..1u64 << n);
            return EventSet(bits);
        }
        let lo = self.rng.gen_range(0..n);
        let hi = self.rng.gen_range(0..n);
        let between: EventSet = (0..n).filter(|&e| p.le(lo, e) && p.le(e, hi)).collect();
        if between.is_empty() {
            EventSet::singleton(lo)
        } else {
            between
        }
    }

    pub fn sp_term(&mut self) -> SpTerm {
        let depth = self.cfg.term_depth;
        self.sp_term_at(depth)
    }

    fn sp_term_at(&mut self, depth: usize) -> SpTerm {
        if depth == 0 || self.rng.gen_bool(0.25) {
            return if self.rng.gen_bool(0.1) {
                SpTerm::One
            } else {
                SpTerm::Atom(self.label())
            };
        }
        match self.rng.gen_range(0..5) {
            0 | 1 => self.sp_term_at(depth - 1).seq(self.sp_term_at(depth - 1)),
            2 | 3 => self.sp_term_at(depth - 1).par(self.sp_term_at(depth - 1)),
            _ => self.sp_term_at(depth - 1).boxed(),
        }
    }

    pub fn term(&mut self) -> Term {
        let depth = self.cfg.term_depth;
        self.term_at(depth)
    }

    fn term_at(&mut self, depth: usize) -> Term {
        if depth == 0 || self.rng.gen_bool(0.2) {
            return match self.rng.gen_range(0..10) {
                0 => Term::Zero,
                1 => Term::One,
                _ => Term::Atom(self.label()),
            };
        }
        match self.rng.gen_range(0..7) {
            0 | 1 => self.term_at(depth - 1).seq(self.term_at(depth - 1)),
            2 | 3 => self.term_at(depth - 1).par(self.term_at(depth - 1)),
            4 | 5 => self.term_at(depth - 1).join(self.term_at(depth - 1)),
            _ => self.term_at(depth - 1).boxed(),
        }
    }

    pub fn formula(&mut self, positive: bool) -> Formula {
        let depth = self.cfg.formula_depth;
        self.formula_at(depth, positive)
    }

    fn formula_at(&mut self, depth: usize, positive: bool) -> Formula {
        if depth == 0 || self.rng.gen_bool(0.2) {
            return if self.rng.gen_bool(0.2) {
                Formula::Emp
            } else {
                Formula::Atom(self.label())
            };
        }
        let d = depth - 1;
        let kinds = if positive { 6 } else { 7 };
        match self.rng.gen_range(0..kinds) {
            0 => self.formula_at(d, positive).and(self.formula_at(d, positive)),
            1 => self.formula_at(d, positive).or(self.formula_at(d, positive)),
            2 => self.formula_at(d, positive).then(self.formula_at(d, positive)),
            3 => self.formula_at(d, positive).next(self.formula_at(d, positive)),
            4 => self.formula_at(d, positive).boxed(),
            5 => self.formula_at(d, positive).context(),
            _ => self.formula_at(d, positive).not(),
        }
    }
}

/// `a`, `b`, …, `z`, then `a1`, `b1`, …
fn alphabet(k: usize) -> String {
    let letter = (b'a' + (k % 26) as u8) as char;
    if k < 26 {
        letter.to_string()
    } else {
        format!("{letter}{}", k / 26)
    }
}

pub fn gen_poset(cfg: &GenConfig) -> Poset {
    Generator::new(*cfg).poset()
}

pub fn gen_sp_term(cfg: &GenConfig) -> SpTerm {
    Generator::new(*cfg).sp_term()
}

pub fn gen_term(cfg: &GenConfig) -> Term {
    Generator::new(*cfg).term()
}

pub fn gen_formula(cfg: &GenConfig, positive: bool) -> Formula {
    Generator::new(*cfg).formula(positive)
}

/// A case on which the model checker and the oracle disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub poset: PosetJson,
    pub formula: String,
    pub relation: Relation,
    /// The oracle's verdict.
    pub expected: bool,
    /// The model checker's verdict.
    pub actual: bool,
    pub shrunk: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fault: Option<Fault>,
}

impl Discrepancy {
    pub fn poset(&self) -> Poset {
        self.poset.to_poset().expect("discrepancy holds a valid poset")
    }

    pub fn formula(&self) -> Formula {
        parse_formula(&self.formula).expect("discrepancy holds a valid formula")
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("discrepancy serialises")
    }

    /// Re-runs both sides; true when they still disagree as recorded.
    pub fn replay(&self, caps: OracleCaps) -> bool {
        match compare(&self.poset(), &self.formula(), self.relation, self.fault, caps) {
            Some((expected, actual)) => expected == self.expected && actual == self.actual,
            None => false,
        }
    }
}

/// `(oracle, checker)` verdicts, or `None` when the oracle gives up.
fn compare(
    p: &Poset,
    phi: &Formula,
    rel: Relation,
    fault: Option<Fault>,
    caps: OracleCaps,
) -> Option<(bool, bool)> {
    let expected = Oracle::new(caps).check(p, phi, rel).ok()?.as_bool()?;
    let mut mc = match fault {
        Some(f) => ModelChecker::with_fault(f),
        None => ModelChecker::new(),
    };
    let actual = mc.holds(p, phi, rel).ok()?;
    Some((expected, actual))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DifferentialSummary {
    pub relation: Option<Relation>,
    /// Cases the oracle decided.
    pub decided: usize,
    pub unknown: usize,
    pub discrepancies: Vec<Discrepancy>,
}

#[derive(Clone, Copy, Debug)]
pub struct DifferentialOptions {
    pub caps: OracleCaps,
    pub fault: Option<Fault>,
    /// Shrink each discrepancy before reporting it.
    pub shrink: bool,
}

impl Default for DifferentialOptions {
    fn default() -> DifferentialOptions {
        DifferentialOptions {
            caps: OracleCaps::default(),
            fault: None,
            shrink: true,
        }
    }
}

/// Draws random (poset, formula) pairs for one relation from the seeded
/// stream until the oracle has decided `n_cases` of them, giving up after
/// four times as many draws. Formulas are positive except under `≅`.
pub fn differential_relation(
    cfg: &GenConfig,
    relation: Relation,
    n_cases: usize,
    opts: DifferentialOptions,
) -> DifferentialSummary {
    let mut gen = Generator::new(GenConfig {
        seed: cfg.seed ^ (relation as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15),
        max_events: cfg.max_events.min(opts.caps.max_events),
        ..*cfg
    });
    let mut oracle = Oracle::new(opts.caps);
    let mut mc = match opts.fault {
        Some(f) => ModelChecker::with_fault(f),
        None => ModelChecker::new(),
    };
    let mut summary = DifferentialSummary {
        relation: Some(relation),
        ..DifferentialSummary::default()
    };
    for _ in 0..n_cases * 4 {
        if summary.decided == n_cases {
            break;
        }
        let p = gen.poset();
        let phi = gen.formula(relation != Relation::Iso);
        let verdict = oracle
            .check(&p, &phi, relation)
            .expect("generated formula fits the fragment");
        let expected = match verdict {
            OracleVerdict::Unknown => {
                summary.unknown += 1;
                continue;
            }
            v => v == OracleVerdict::True,
        };
        summary.decided += 1;
        let actual = mc
            .holds(&p, &phi, relation)
            .expect("generated formula fits the fragment");
        if actual != expected {
            let d = Discrepancy {
                poset: PosetJson::from_poset(&p),
                formula: phi.to_string(),
                relation,
                expected,
                actual,
                shrunk: false,
                fault: opts.fault,
            };
            summary.discrepancies.push(if opts.shrink {
                shrink_with(&d, opts.caps)
            } else {
                d
            });
        }
    }
    summary
}

/// Runs [`differential_relation`] for every relation and collects the
/// discrepancies. Empty on a correct build.
pub fn differential_run(cfg: &GenConfig, n_cases: usize) -> Vec<Discrepancy> {
    Relation::ALL
        .iter()
        .flat_map(|&rel| {
            differential_relation(cfg, rel, n_cases, DifferentialOptions::default()).discrepancies
        })
        .collect()
}

pub fn shrink(d: &Discrepancy) -> Discrepancy {
    shrink_with(d, OracleCaps::default())
}

/// Greedy shrinking: drops events, boxes, order edges and formula nodes as
/// long as the two sides keep disagreeing.
pub fn shrink_with(d: &Discrepancy, caps: OracleCaps) -> Discrepancy {
    let mut p = d.poset();
    let mut phi = d.formula();
    let still_fails = |p: &Poset, phi: &Formula| matches!(compare(p, phi, d.relation, d.fault, caps), Some((e, a)) if e != a);
    loop {
        let smaller = smaller_posets(&p)
            .into_iter()
            .map(|q| (q, phi.clone()))
            .chain(smaller_formulas(&phi).into_iter().map(|g| (p.clone(), g)))
            .find(|(q, g)| still_fails(q, g));
        match smaller {
            Some((q, g)) => {
                p = q;
                phi = g;
            }
            None => break,
        }
    }
    let (expected, actual) = compare(&p, &phi, d.relation, d.fault, caps).unwrap_or((d.expected, d.actual));
    Discrepancy {
        poset: PosetJson::from_poset(&p),
        formula: phi.to_string(),
        relation: d.relation,
        expected,
        actual,
        shrunk: true,
        fault: d.fault,
    }
}

fn smaller_posets(p: &Poset) -> Vec<Poset> {
    let n = p.len();
    let mut out: Vec<Poset> = (0..n)
        .map(|e| p.restrict(p.events().without(e)).expect("subset of events"))
        .collect();
    for &b in p.boxes() {
        let boxes = p.boxes().iter().copied().filter(|&c| c != b);
        out.push(Poset::from_parts(p.labels().to_vec(), p.covering_pairs(), boxes).expect("fewer boxes"));
    }
    let covers = p.covering_pairs();
    for skip in 0..covers.len() {
        let edges = covers
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != skip)
            .map(|(_, &e)| e);
        out.push(Poset::from_parts(p.labels().to_vec(), edges, p.boxes().to_vec()).expect("fewer edges"));
    }
    out
}

fn smaller_formulas(phi: &Formula) -> Vec<Formula> {
    let mut out = Vec::new();
    match phi {
        Formula::Emp => return out,
        Formula::Atom(_) => {
            out.push(Formula::Emp);
            return out;
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::SeqThen(a, b) | Formula::ParNext(a, b) => {
            out.push((**a).clone());
            out.push((**b).clone());
            for a2 in smaller_formulas(a) {
                out.push(rebuild(phi, a2, (**b).clone()));
            }
            for b2 in smaller_formulas(b) {
                out.push(rebuild(phi, (**a).clone(), b2));
            }
        }
        Formula::Neg(a) | Formula::BoxMod(a) | Formula::ContextMod(a) => {
            out.push((**a).clone());
            for a2 in smaller_formulas(a) {
                out.push(rebuild(phi, a2, Formula::Emp));
            }
        }
    }
    out
}

/// `phi`'s top connective applied to new children (`right` is ignored for
/// unary connectives).
fn rebuild(phi: &Formula, left: Formula, right: Formula) -> Formula {
    match phi {
        Formula::And(..) => left.and(right),
        Formula::Or(..) => left.or(right),
        Formula::SeqThen(..) => left.then(right),
        Formula::ParNext(..) => left.next(right),
        Formula::Neg(_) => left.not(),
        Formula::BoxMod(_) => left.boxed(),
        Formula::ContextMod(_) => left.context(),
        Formula::Emp | Formula::Atom(_) => phi.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_configuration_gives_unit() {
        let cfg = GenConfig {
            max_events: 0,
            ..GenConfig::default()
        };
        assert_eq!(gen_poset(&cfg), Poset::unit());
    }

    #[test]
    fn generated_posets_are_valid() {
        let mut g = Generator::new(GenConfig {
            max_events: 7,
            max_box_attempts: 3,
            ..GenConfig::default()
        });
        for _ in 0..1000 {
            assert_eq!(g.poset().check_invariants(), Ok(()));
        }
    }

    #[test]
    fn positive_formulas_have_no_negation() {
        let mut g = Generator::new(GenConfig::default());
        for _ in 0..500 {
            assert!(g.formula(true).is_positive());
        }
    }

    #[test]
    fn same_seed_same_stream() {
        let cfg = GenConfig {
            seed: 42,
            ..GenConfig::default()
        };
        let (mut a, mut b) = (Generator::new(cfg), Generator::new(cfg));
        for _ in 0..50 {
            assert_eq!(a.poset(), b.poset());
            assert_eq!(a.formula(false), b.formula(false));
            assert_eq!(a.term(), b.term());
        }
    }

    #[test]
    fn seeded_fault_is_caught_and_shrunk() {
        let cfg = GenConfig {
            seed: 7,
            alphabet_size: 1,
            ..GenConfig::default()
        };
        let opts = DifferentialOptions {
            fault: Some(Fault::DropParNesting),
            ..DifferentialOptions::default()
        };
        let summary = differential_relation(&cfg, Relation::Iso, 5000, opts);
        assert!(!summary.discrepancies.is_empty());
        for d in &summary.discrepancies {
            assert!(d.shrunk && d.poset().len() <= 4);
            assert!(d.replay(opts.caps));
            let back: Discrepancy = serde_json::from_str(&d.to_json_line()).unwrap();
            assert_eq!(&back, d);
        }
    }
}
