//! Pomset logic: formulas, satisfaction under `≅`, `⊑` and `⊒`, and the
//! reasoning tools built on it.

mod frame;
mod oracle;
mod sat;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poset::Label;
use crate::term::{is_ident_char, is_ident_start, ParseError};

pub use frame::{
    frame_check, independent, phi_of_sp, phi_of_term, sat_set, sat_set_term, substitute_formula, FrameReport,
    FrameShape,
};
pub use oracle::{sat_oracle, Oracle, OracleCaps, OracleVerdict};
pub use sat::{sat, Fault, ModelChecker, SatResult, Side, Witness};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Emp,
    Atom(Label),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Neg(Box<Formula>),
    /// `φ |> ψ`: a prefix satisfying `φ` followed by the rest satisfying `ψ`.
    SeqThen(Box<Formula>, Box<Formula>),
    /// `φ || ψ`: two independent parts.
    ParNext(Box<Formula>, Box<Formula>),
    /// `[φ]`: the whole run is one box whose contents satisfy `φ`.
    BoxMod(Box<Formula>),
    /// `<>φ`: some sub-run satisfies `φ`.
    ContextMod(Box<Formula>),
}

impl Formula {
    pub fn atom(label: impl Into<Label>) -> Formula {
        Formula::Atom(label.into())
    }

    pub fn and(self, other: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(other))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        Formula::Neg(Box::new(self))
    }

    pub fn then(self, other: Formula) -> Formula {
        Formula::SeqThen(Box::new(self), Box::new(other))
    }

    pub fn next(self, other: Formula) -> Formula {
        Formula::ParNext(Box::new(self), Box::new(other))
    }

    pub fn boxed(self) -> Formula {
        Formula::BoxMod(Box::new(self))
    }

    pub fn context(self) -> Formula {
        Formula::ContextMod(Box::new(self))
    }

    /// Disjunction of a non-empty list; `None` for an empty one.
    pub fn or_all(items: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        items.into_iter().reduce(Formula::or)
    }

    pub fn next_all(items: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        items.into_iter().reduce(Formula::next)
    }

    /// No negation anywhere.
    pub fn is_positive(&self) -> bool {
        match self {
            Formula::Emp | Formula::Atom(_) => true,
            Formula::Neg(_) => false,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::SeqThen(a, b) | Formula::ParNext(a, b) => {
                a.is_positive() && b.is_positive()
            }
            Formula::BoxMod(a) | Formula::ContextMod(a) => a.is_positive(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Emp | Formula::Atom(_) => 0,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::SeqThen(a, b) | Formula::ParNext(a, b) => {
                1 + a.depth().max(b.depth())
            }
            Formula::Neg(a) | Formula::BoxMod(a) | Formula::ContextMod(a) => 1 + a.depth(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Emp | Formula::Atom(_) => 1,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::SeqThen(a, b) | Formula::ParNext(a, b) => {
                1 + a.size() + b.size()
            }
            Formula::Neg(a) | Formula::BoxMod(a) | Formula::ContextMod(a) => 1 + a.size(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// `≅`: the reading that admits negation.
    Iso,
    /// `⊑`: witnesses may drop order and boxes.
    Sub,
    /// `⊒`: witnesses may add order and boxes.
    Rev,
}

impl Relation {
    pub const ALL: [Relation; 3] = [Relation::Iso, Relation::Sub, Relation::Rev];

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Iso => "≅",
            Relation::Sub => "⊑",
            Relation::Rev => "⊒",
        }
    }
}

impl FromStr for Relation {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "iso" => Ok(Relation::Iso),
            "sub" => Ok(Relation::Sub),
            "rev" => Ok(Relation::Rev),
            other => Err(format!("unknown relation {other:?}; expected iso, sub or rev")),
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Relation::Iso => "iso",
            Relation::Sub => "sub",
            Relation::Rev => "rev",
        };
        f.write_str(name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantifier {
    All,
    Some,
}

impl FromStr for Quantifier {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all" => Ok(Quantifier::All),
            "some" => Ok(Quantifier::Some),
            other => Err(format!("unknown quantifier {other:?}; expected all or some")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SatMode {
    pub relation: Relation,
    pub quantifier: Quantifier,
}

impl SatMode {
    pub fn new(relation: Relation, quantifier: Quantifier) -> SatMode {
        SatMode { relation, quantifier }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogicError {
    #[error("negation is only available under iso, not under {0}")]
    Negation(Relation),
    #[error("the term denotes no poset, so its formula would be an empty disjunction")]
    EmptyDisjunction,
}

pub(crate) fn check_fragment(phi: &Formula, relation: Relation) -> Result<(), LogicError> {
    if relation != Relation::Iso && !phi.is_positive() {
        return Err(LogicError::Negation(relation));
    }
    Ok(())
}

struct FormulaParser<'a> {
    text: &'a str,
    pos: usize,
}

impl FormulaParser<'_> {
    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn rest(&mut self) -> &str {
        self.skip_ws();
        &self.text[self.pos..]
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn error(&mut self, what: &str) -> ParseError {
        let pos = self.pos;
        match self.rest().chars().next() {
            Some(c) => ParseError::new(pos, format!("{what}, found '{c}'")),
            None => ParseError::new(pos, format!("{what}, found end of input")),
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), ParseError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{token}'")))
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.eat("\\/") {
            lhs = lhs.or(self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.next()?;
        while self.eat("/\\") {
            lhs = lhs.and(self.next()?);
        }
        Ok(lhs)
    }

    fn next(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.then()?;
        while self.eat("||") {
            lhs = lhs.next(self.then()?);
        }
        Ok(lhs)
    }

    fn then(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.prefix()?;
        if self.eat("|>") {
            return Ok(lhs.then(self.then()?));
        }
        Ok(lhs)
    }

    fn prefix(&mut self) -> Result<Formula, ParseError> {
        if self.eat("~") {
            return Ok(self.prefix()?.not());
        }
        if self.eat("<>") {
            return Ok(self.prefix()?.context());
        }
        if self.eat("[") {
            let inner = self.or()?;
            self.expect("]")?;
            return Ok(inner.boxed());
        }
        if self.eat("(") {
            let inner = self.or()?;
            self.expect(")")?;
            return Ok(inner);
        }
        let start = self.pos;
        match self.rest().chars().next() {
            Some(c) if is_ident_start(c) => {
                let len: usize = self.text[start..]
                    .chars()
                    .take_while(|&c| is_ident_char(c))
                    .map(char::len_utf8)
                    .sum();
                self.pos += len;
                let word = &self.text[start..self.pos];
                Ok(if word == "emp" {
                    Formula::Emp
                } else {
                    Formula::Atom(Label::from(word))
                })
            }
            _ => Err(self.error("expected a formula")),
        }
    }
}

/// Parses a formula. From tightest to loosest: the prefix forms `~φ`, `[φ]`
/// and `<>φ`; then `|>` (right-associative); `||`; `/\`; `\/`. The keyword
/// `emp` is the empty run, any other identifier an atom.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = FormulaParser { text, pos: 0 };
    let f = p.or()?;
    if !p.rest().is_empty() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(f)
}

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Or(..) => 0,
        Formula::And(..) => 1,
        Formula::ParNext(..) => 2,
        Formula::SeqThen(..) => 3,
        Formula::Neg(_) | Formula::ContextMod(_) => 4,
        _ => 5,
    }
}

fn render(f: &Formula, out: &mut String) {
    let wrap = |g: &Formula, parens: bool, out: &mut String| {
        if parens {
            out.push('(');
            render(g, out);
            out.push(')');
        } else {
            render(g, out);
        }
    };
    let left_assoc = |out: &mut String, level: u8, op: &str, a: &Formula, b: &Formula| {
        wrap(a, precedence(a) < level, out);
        out.push_str(op);
        wrap(b, precedence(b) <= level, out);
    };
    match f {
        Formula::Emp => out.push_str("emp"),
        Formula::Atom(a) => out.push_str(a.as_str()),
        Formula::Or(a, b) => left_assoc(out, 0, " \\/ ", a, b),
        Formula::And(a, b) => left_assoc(out, 1, " /\\ ", a, b),
        Formula::ParNext(a, b) => left_assoc(out, 2, " || ", a, b),
        Formula::SeqThen(a, b) => {
            wrap(a, precedence(a) <= 3, out);
            out.push_str(" |> ");
            wrap(b, precedence(b) < 3, out);
        }
        Formula::Neg(a) => {
            out.push('~');
            wrap(a, precedence(a) < 4, out);
        }
        Formula::ContextMod(a) => {
            out.push_str("<>");
            wrap(a, precedence(a) < 4, out);
        }
        Formula::BoxMod(a) => {
            out.push('[');
            render(a, out);
            out.push(']');
        }
    }
}

pub fn render_formula(f: &Formula) -> String {
    let mut s = String::new();
    render(f, &mut s);
    s
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_formula(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn conflict_formula() {
        let rx = Formula::atom("rx");
        let ry = Formula::atom("ry");
        let wx = Formula::atom("wx");
        let wy = Formula::atom("wy");
        assert_eq!(
            f("<>((rx||ry)|>(wx||wy))"),
            rx.next(ry).then(wx.next(wy)).context()
        );
    }

    #[test]
    fn nonempty_without_boxed_write() {
        let w = Formula::atom("w");
        assert_eq!(
            f("~(emp \\/ <>[<>w])"),
            Formula::Emp.or(w.context().boxed().context()).not()
        );
    }

    #[test]
    fn precedence() {
        let (a, b, c) = (Formula::atom("a"), Formula::atom("b"), Formula::atom("c"));
        assert_eq!(f("a|>b||c"), a.clone().then(b.clone()).next(c.clone()));
        assert_eq!(f("a|>b|>c"), a.clone().then(b.clone().then(c.clone())));
        assert_eq!(f("a/\\b\\/c"), a.clone().and(b.clone()).or(c.clone()));
        assert_eq!(f("~a|>b"), a.clone().not().then(b.clone()));
        assert_eq!(f("<>[a]||emp"), a.boxed().context().next(Formula::Emp));
    }

    #[test]
    fn round_trip() {
        for s in [
            "<>((rx||ry)|>(wx||wy))",
            "~(emp \\/ <>[<>w])",
            "(a|>b)|>c",
            "a|>b|>c",
            "a||(b||c)",
            "~~a",
            "<>~[a \\/ b] /\\ (c \\/ d)",
            "(a \\/ b) /\\ c || d",
        ] {
            let x = f(s);
            assert_eq!(f(&render_formula(&x)), x, "{s} -> {x}");
        }
    }

    #[test]
    fn errors() {
        assert_eq!(parse_formula("a ||").unwrap_err().position, 4);
        assert!(parse_formula("[a").is_err());
        assert!(parse_formula("a b").is_err());
        assert!(parse_formula("a | b").is_err());
    }

    #[test]
    fn fragments() {
        assert!(f("<>[a||b]").is_positive());
        assert!(!f("a /\\ ~b").is_positive());
        assert_eq!(
            check_fragment(&f("~a"), Relation::Sub),
            Err(LogicError::Negation(Relation::Sub))
        );
    }
}
