//! Built-in case studies: the two-process counter and the voting protocol.
//!
//! Each study is a list of [`CaseCheck`]s pairing a satisfaction query with
//! the verdict the protocol designer expects. Observed verdicts come from the
//! model checker as is; nothing here adjusts them.

use std::fmt;

use serde::Serialize;

use crate::logic::{frame_check, sat_set, Formula, FrameShape, LogicError, Quantifier, Relation, SatMode};
use crate::poset::{EventSet, Label, Poset, PosetSet};
use crate::term::{interp, interp_sp, SpTerm, Term};

/// One process of the counter: read, increment and write back through a
/// private variable.
fn increment(var: &str) -> SpTerm {
    SpTerm::seq_all(["r", "i", "w"].map(|op| SpTerm::atom(format!("{op}{var}").as_str())))
}

/// `print;(rx;ix;wx | ry;iy;wy);print`, with each increment boxed when
/// `boxed` is set.
pub fn build_counter(boxed: bool) -> SpTerm {
    let (x, y) = (increment("x"), increment("y"));
    let (x, y) = if boxed { (x.boxed(), y.boxed()) } else { (x, y) };
    SpTerm::seq_all([SpTerm::atom("print"), x.par(y), SpTerm::atom("print")])
}

/// The interleaving of the naive counter in which both reads precede both
/// writes.
pub fn faulty_counter_run() -> SpTerm {
    SpTerm::seq_all(
        ["print", "rx", "ry", "ix", "iy", "wx", "wy", "print"]
            .into_iter()
            .map(SpTerm::atom),
    )
}

/// Both reads happen before both writes.
pub fn counter_conflict() -> Formula {
    let reads = Formula::atom("rx").next(Formula::atom("ry"));
    let writes = Formula::atom("wx").next(Formula::atom("wy"));
    reads.then(writes).context()
}

/// The boxed counter poset written out event by event.
pub fn boxed_counter_poset() -> Poset {
    let labels: Vec<Label> = ["print", "rx", "ix", "wx", "ry", "iy", "wy", "print"]
        .into_iter()
        .map(Label::from)
        .collect();
    let edges = [(0, 1), (1, 2), (2, 3), (3, 7), (0, 4), (4, 5), (5, 6), (6, 7)];
    let boxes = [EventSet::from_events(1..4), EventSet::from_events(4..7)];
    Poset::from_parts(labels, edges, boxes).expect("well-formed counter poset")
}

/// The voting protocol with `voters` voters and `counters` counters.
///
/// Labels are flattened: `choose_i_j`, `read_j`, `inc`, `write_j` and
/// `send_i`, with 1-based indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Voting {
    pub voters: usize,
    pub counters: usize,
}

impl Voting {
    pub fn new(voters: usize, counters: usize) -> Option<Voting> {
        (voters >= 1 && counters >= 1).then_some(Voting { voters, counters })
    }

    fn voter_ids(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.voters
    }

    fn counter_ids(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.counters
    }

    pub fn choose_label(i: usize, j: usize) -> String {
        format!("choose_{i}_{j}")
    }

    /// Voter `i` picks a counter and increments it.
    pub fn vote(&self, i: usize) -> Term {
        Term::join_all(self.counter_ids().map(|j| {
            Term::seq_all([
                Term::atom(Self::choose_label(i, j).as_str()),
                Term::atom(format!("read_{j}").as_str()),
                Term::atom("inc"),
                Term::atom(format!("write_{j}").as_str()),
            ])
        }))
    }

    /// All voters in parallel, each vote boxed.
    pub fn choose(&self) -> Term {
        Term::par_all(self.voter_ids().map(|i| self.vote(i).boxed()))
    }

    pub fn publish(&self) -> Term {
        Term::par_all(self.voter_ids().map(|i| Term::atom(format!("send_{i}").as_str())))
    }

    pub fn process(&self) -> Term {
        self.choose().seq(self.publish())
    }

    /// The protocol without the vote boxes.
    pub fn unboxed_process(&self) -> Term {
        Term::par_all(self.voter_ids().map(|i| self.vote(i))).seq(self.publish())
    }

    /// The protocol with voting and publishing each boxed as a whole.
    pub fn fenced_process(&self) -> Term {
        self.choose().boxed().seq(self.publish().boxed())
    }

    /// Two reads of counter `j` both before two writes of it.
    pub fn conflict(&self, j: usize) -> Formula {
        let read = Formula::atom(format!("read_{j}").as_str());
        let write = Formula::atom(format!("write_{j}").as_str());
        read.clone().next(read).then(write.clone().next(write)).context()
    }

    fn any_send(&self) -> Formula {
        Formula::or_all(
            self.voter_ids()
                .map(|i| Formula::atom(format!("send_{i}").as_str())),
        )
        .expect("voters >= 1")
    }

    fn any_choice(&self) -> Formula {
        Formula::or_all(self.voter_ids().flat_map(|i| {
            self.counter_ids()
                .map(move |j| Formula::atom(Self::choose_label(i, j).as_str()))
        }))
        .expect("voters, counters >= 1")
    }

    /// Voting does not send.
    pub fn no_send(&self) -> Formula {
        self.any_send().not().context()
    }

    /// Publishing does not choose.
    pub fn no_choice(&self) -> Formula {
        self.any_choice().not().context()
    }

    /// A part without sends followed by a part without choices.
    pub fn seqsep(&self) -> Formula {
        self.no_send().then(self.no_choice())
    }

    /// Every voter chooses before being sent the result.
    pub fn votethensend(&self) -> Formula {
        Formula::next_all(self.voter_ids().map(|i| {
            let chose = Formula::or_all(
                self.counter_ids()
                    .map(|j| Formula::atom(Self::choose_label(i, j).as_str())),
            )
            .expect("counters >= 1");
            chose.then(Formula::atom(format!("send_{i}").as_str()))
        }))
        .expect("voters >= 1")
        .context()
    }

    /// Two writes inside one box: some voter voted twice.
    pub fn unique_votes(&self) -> Formula {
        Formula::or_all(self.counter_ids().flat_map(|j| {
            self.counter_ids().map(move |k| {
                let w = |c: usize| Formula::atom(format!("write_{c}").as_str());
                w(j).next(w(k)).context().boxed().context()
            })
        }))
        .expect("counters >= 1")
    }

    /// A write to any counter.
    pub fn any_write(&self) -> Formula {
        Formula::or_all(
            self.counter_ids()
                .map(|j| Formula::atom(format!("write_{j}").as_str())),
        )
        .expect("counters >= 1")
    }

    /// Non-empty, with no box around a write.
    pub fn write_free(&self) -> Formula {
        Formula::Emp
            .or(self.any_write().context().boxed().context())
            .not()
    }

    /// Two writes in sequence somewhere.
    pub fn write_then_write(&self) -> Formula {
        self.any_write().then(self.any_write()).context()
    }

    /// `⟨⟩(w ▷ w) ▷ [write_free]`.
    pub fn frame_formula(&self) -> Formula {
        self.write_then_write().then(self.write_free().boxed())
    }

    /// The protocol with each vote replaced by an opaque `vote_i` action.
    pub fn abstract_process(&self) -> Term {
        Term::par_all(
            self.voter_ids()
                .map(|i| Term::atom(format!("vote_{i}").as_str()).boxed()),
        )
        .seq(self.publish())
    }

    /// Maps `vote_i` to the implementation of voter `i`.
    pub fn refine(&self, term: &Term) -> Term {
        term.substitute(&|l: &Label| {
            let i: usize = l.as_str().strip_prefix("vote_")?.parse().ok()?;
            self.voter_ids().contains(&i).then(|| self.vote(i))
        })
    }

    /// `seqsep` with `vote_i` counted as a choice.
    pub fn abstract_seqsep(&self) -> Formula {
        let votes = Formula::or_all(
            self.voter_ids()
                .map(|i| Formula::atom(format!("vote_{i}").as_str())),
        )
        .expect("voters >= 1");
        self.no_send().then(votes.not().context())
    }
}

/// A satisfaction query with its expected verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseCheck {
    pub name: String,
    pub expected: bool,
    pub observed: bool,
}

impl CaseCheck {
    pub fn new(name: impl Into<String>, expected: bool, observed: bool) -> CaseCheck {
        CaseCheck {
            name: name.into(),
            expected,
            observed,
        }
    }

    pub fn passed(&self) -> bool {
        self.expected == self.observed
    }
}

impl fmt::Display for CaseCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} (expected {}, observed {})",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.expected,
            self.observed
        )
    }
}

fn query(
    set: &PosetSet,
    phi: &Formula,
    relation: Relation,
    quantifier: Quantifier,
) -> Result<bool, LogicError> {
    sat_set(set, phi, SatMode::new(relation, quantifier))
}

fn single(p: Poset) -> PosetSet {
    let mut set = PosetSet::new();
    set.insert(p);
    set
}

pub fn counter_checks() -> Result<Vec<CaseCheck>, LogicError> {
    let conflict = counter_conflict();
    let run = single(interp_sp(&faulty_counter_run()));
    let naive = single(interp_sp(&build_counter(false)));
    let boxed = single(interp_sp(&build_counter(true)));
    Ok(vec![
        CaseCheck::new(
            "boxed counter has the expected shape",
            true,
            crate::poset::iso(&interp_sp(&build_counter(true)), &boxed_counter_poset()),
        ),
        CaseCheck::new(
            "faulty run |=rev conflict",
            true,
            query(&run, &conflict, Relation::Rev, Quantifier::All)?,
        ),
        CaseCheck::new(
            "faulty run |=sub conflict",
            true,
            query(&run, &conflict, Relation::Sub, Quantifier::All)?,
        ),
        CaseCheck::new(
            "naive counter |=rev,some conflict",
            true,
            query(&naive, &conflict, Relation::Rev, Quantifier::Some)?,
        ),
        CaseCheck::new(
            "boxed counter |=rev,some conflict",
            false,
            query(&boxed, &conflict, Relation::Rev, Quantifier::Some)?,
        ),
    ])
}

pub fn voting_checks(v: &Voting) -> Result<Vec<CaseCheck>, LogicError> {
    let process = interp(&v.process());
    let unboxed = interp(&v.unboxed_process());
    let mut checks = Vec::new();
    for j in 1..=v.counters {
        let conflict = v.conflict(j);
        checks.push(CaseCheck::new(
            format!("unboxed protocol |=rev,some conflict_{j}"),
            true,
            query(&unboxed, &conflict, Relation::Rev, Quantifier::Some)?,
        ));
        checks.push(CaseCheck::new(
            format!("protocol |=rev,some conflict_{j}"),
            false,
            query(&process, &conflict, Relation::Rev, Quantifier::Some)?,
        ));
    }

    let choose = interp(&v.choose());
    let publish = interp(&v.publish());
    checks.push(CaseCheck::new(
        "voting |=iso,all no send",
        true,
        query(&choose, &v.no_send(), Relation::Iso, Quantifier::All)?,
    ));
    checks.push(CaseCheck::new(
        "publishing |=iso,all no choice",
        true,
        query(&publish, &v.no_choice(), Relation::Iso, Quantifier::All)?,
    ));
    checks.push(CaseCheck::new(
        "protocol |=iso,all seqsep",
        true,
        query(&process, &v.seqsep(), Relation::Iso, Quantifier::All)?,
    ));
    let abstracted = interp(&v.abstract_process());
    let refined = interp(&v.refine(&v.abstract_process()));
    checks.push(CaseCheck::new(
        "abstract protocol |=iso,all seqsep",
        true,
        query(&abstracted, &v.abstract_seqsep(), Relation::Iso, Quantifier::All)?,
    ));
    checks.push(CaseCheck::new(
        "refined protocol |=iso,all seqsep",
        true,
        query(&refined, &v.seqsep(), Relation::Iso, Quantifier::All)?,
    ));
    checks.push(CaseCheck::new(
        "protocol |=sub,all votethensend",
        true,
        query(&process, &v.votethensend(), Relation::Sub, Quantifier::All)?,
    ));
    checks.push(CaseCheck::new(
        "protocol |=sub,some double vote",
        false,
        query(&process, &v.unique_votes(), Relation::Sub, Quantifier::Some)?,
    ));
    checks.extend(frame_checks(v)?);
    Ok(checks)
}

/// The fenced protocol against `⟨⟩(w ▷ w) ▷ [write_free]`, argued locally.
fn frame_checks(v: &Voting) -> Result<Vec<CaseCheck>, LogicError> {
    let fenced_choose = interp(&v.choose().boxed());
    let fenced_publish = interp(&v.publish().boxed());
    let phi = v.write_free();
    let psi = v.write_then_write();
    let iso = |set: &PosetSet, f: &Formula, q| query(set, f, Relation::Iso, q);

    let independent = fenced_choose
        .iter()
        .map(|p| crate::logic::independent(p, &phi, Relation::Iso))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .all(|b| b);
    let mut rule_agrees = true;
    for p in fenced_choose.iter() {
        for q in fenced_publish.iter() {
            let report = frame_check(p, q, &phi, &psi, FrameShape::SeqSuffix, Relation::Iso)?;
            rule_agrees &= !report.preconditions() || report.biconditional();
        }
    }
    Ok(vec![
        CaseCheck::new(
            "fenced publishing |=iso,all [write_free]",
            true,
            iso(&fenced_publish, &phi.clone().boxed(), Quantifier::All)?,
        ),
        CaseCheck::new("fenced voting independent of write_free", true, independent),
        CaseCheck::new(
            "fenced voting |=iso,all <>(w |> w)",
            false,
            iso(&fenced_choose, &psi, Quantifier::All)?,
        ),
        CaseCheck::new(
            "fenced protocol |=iso,all <>(w |> w) |> [write_free]",
            false,
            iso(&interp(&v.fenced_process()), &v.frame_formula(), Quantifier::All)?,
        ),
        CaseCheck::new("frame rule agrees wherever it applies", true, rule_agrees),
    ])
}

/// Names accepted by [`run_case_study`].
pub const CASE_STUDIES: [&str; 2] = ["counter", "voting"];

pub fn run_case_study(name: &str, voting: Voting) -> Option<Result<Vec<CaseCheck>, LogicError>> {
    match name {
        "counter" => Some(counter_checks()),
        "voting" => Some(voting_checks(&voting)),
        _ => None,
    }
}
