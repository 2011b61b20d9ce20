//! Process terms: syntax, interpretation into posets, series-parallel
//! recognition, and decision procedures for the axiom systems.

mod decide;
mod interp;
mod sp;

use std::fmt;

use thiserror::Error;

use crate::poset::Label;

pub use decide::{
    decide, decide_with_witness, set_rel, AxiomSystem, DecideError, Decision, Query, SetRelation,
};
pub use interp::{expand, interp, interp_sp, strip_outer_box, syntactic_restrict};
pub use sp::{sp_check, synthesize_term, Pattern, PatternWitness};

/// Series-parallel term: the box-bimonoid fragment without `0` and `+`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SpTerm {
    One,
    Atom(Label),
    Seq(Box<SpTerm>, Box<SpTerm>),
    Par(Box<SpTerm>, Box<SpTerm>),
    Box(Box<SpTerm>),
}

/// Full term language with `0` and nondeterministic choice `+`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Zero,
    One,
    Atom(Label),
    Seq(Box<Term>, Box<Term>),
    Par(Box<Term>, Box<Term>),
    Join(Box<Term>, Box<Term>),
    Box(Box<Term>),
}

impl SpTerm {
    pub fn atom(label: impl Into<Label>) -> SpTerm {
        SpTerm::Atom(label.into())
    }

    pub fn seq(self, other: SpTerm) -> SpTerm {
        SpTerm::Seq(Box::new(self), Box::new(other))
    }

    pub fn par(self, other: SpTerm) -> SpTerm {
        SpTerm::Par(Box::new(self), Box::new(other))
    }

    pub fn boxed(self) -> SpTerm {
        SpTerm::Box(Box::new(self))
    }

    /// Number of atom leaves, i.e. events of the interpretation.
    pub fn event_count(&self) -> usize {
        match self {
            SpTerm::One => 0,
            SpTerm::Atom(_) => 1,
            SpTerm::Seq(a, b) | SpTerm::Par(a, b) => a.event_count() + b.event_count(),
            SpTerm::Box(a) => a.event_count(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            SpTerm::One | SpTerm::Atom(_) => 1,
            SpTerm::Seq(a, b) | SpTerm::Par(a, b) => 1 + a.size() + b.size(),
            SpTerm::Box(a) => 1 + a.size(),
        }
    }

    /// Folds a non-empty list with `;`, or returns `1` for an empty one.
    pub fn seq_all(items: impl IntoIterator<Item = SpTerm>) -> SpTerm {
        items.into_iter().reduce(SpTerm::seq).unwrap_or(SpTerm::One)
    }

    /// Folds a non-empty list with `|`, or returns `1` for an empty one.
    pub fn par_all(items: impl IntoIterator<Item = SpTerm>) -> SpTerm {
        items.into_iter().reduce(SpTerm::par).unwrap_or(SpTerm::One)
    }
}

impl Term {
    pub fn atom(label: impl Into<Label>) -> Term {
        Term::Atom(label.into())
    }

    pub fn seq(self, other: Term) -> Term {
        Term::Seq(Box::new(self), Box::new(other))
    }

    pub fn par(self, other: Term) -> Term {
        Term::Par(Box::new(self), Box::new(other))
    }

    pub fn join(self, other: Term) -> Term {
        Term::Join(Box::new(self), Box::new(other))
    }

    pub fn boxed(self) -> Term {
        Term::Box(Box::new(self))
    }

    pub fn seq_all(items: impl IntoIterator<Item = Term>) -> Term {
        items.into_iter().reduce(Term::seq).unwrap_or(Term::One)
    }

    pub fn par_all(items: impl IntoIterator<Item = Term>) -> Term {
        items.into_iter().reduce(Term::par).unwrap_or(Term::One)
    }

    /// Folds with `+`; the empty sum is `0`.
    pub fn join_all(items: impl IntoIterator<Item = Term>) -> Term {
        items.into_iter().reduce(Term::join).unwrap_or(Term::Zero)
    }

    /// The same term as an [`SpTerm`], if it uses neither `0` nor `+`.
    pub fn to_sp(&self) -> Option<SpTerm> {
        Some(match self {
            Term::Zero | Term::Join(..) => return None,
            Term::One => SpTerm::One,
            Term::Atom(a) => SpTerm::Atom(a.clone()),
            Term::Seq(a, b) => a.to_sp()?.seq(b.to_sp()?),
            Term::Par(a, b) => a.to_sp()?.par(b.to_sp()?),
            Term::Box(a) => a.to_sp()?.boxed(),
        })
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Zero | Term::One | Term::Atom(_) => 1,
            Term::Seq(a, b) | Term::Par(a, b) | Term::Join(a, b) => 1 + a.size() + b.size(),
            Term::Box(a) => 1 + a.size(),
        }
    }

    /// Replaces every atom `a` by `sigma(a)`; atoms mapped to `None` stay.
    pub fn substitute(&self, sigma: &dyn Fn(&Label) -> Option<Term>) -> Term {
        match self {
            Term::Zero => Term::Zero,
            Term::One => Term::One,
            Term::Atom(a) => sigma(a).unwrap_or_else(|| Term::Atom(a.clone())),
            Term::Seq(a, b) => a.substitute(sigma).seq(b.substitute(sigma)),
            Term::Par(a, b) => a.substitute(sigma).par(b.substitute(sigma)),
            Term::Join(a, b) => a.substitute(sigma).join(b.substitute(sigma)),
            Term::Box(a) => a.substitute(sigma).boxed(),
        }
    }
}

/// Homomorphic substitution of atoms by terms.
pub fn substitute_term(term: &Term, sigma: &dyn Fn(&Label) -> Option<Term>) -> Term {
    term.substitute(sigma)
}

impl From<SpTerm> for Term {
    fn from(s: SpTerm) -> Term {
        match s {
            SpTerm::One => Term::One,
            SpTerm::Atom(a) => Term::Atom(a),
            SpTerm::Seq(a, b) => Term::from(*a).seq(Term::from(*b)),
            SpTerm::Par(a, b) => Term::from(*a).par(Term::from(*b)),
            SpTerm::Box(a) => Term::from(*a).boxed(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{message} at position {position}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(position: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            position,
            message: message.into(),
        }
    }
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\'' || c == '.'
}

struct TermParser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> TermParser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("expected '{c}'")))
        }
    }

    fn unexpected(&mut self, what: &str) -> ParseError {
        match self.peek() {
            Some(c) => ParseError::new(self.pos, format!("{what}, found '{c}'")),
            None => ParseError::new(self.pos, format!("{what}, found end of input")),
        }
    }

    fn join(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.par()?;
        while self.eat('+') {
            lhs = lhs.join(self.par()?);
        }
        Ok(lhs)
    }

    fn par(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.seq()?;
        while self.eat('|') {
            lhs = lhs.par(self.seq()?);
        }
        Ok(lhs)
    }

    fn seq(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.primary()?;
        while self.eat(';') {
            lhs = lhs.seq(self.primary()?);
        }
        Ok(lhs)
    }

    fn primary(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let t = self.join()?;
                self.expect(')')?;
                Ok(t)
            }
            Some('[') => {
                self.pos += 1;
                let t = self.join()?;
                self.expect(']')?;
                Ok(t.boxed())
            }
            Some('0') => {
                self.pos += 1;
                Ok(Term::Zero)
            }
            Some('1') => {
                self.pos += 1;
                Ok(Term::One)
            }
            Some(c) if is_ident_start(c) => {
                let start = self.pos;
                let len: usize = self.text[start..]
                    .chars()
                    .take_while(|&c| is_ident_char(c))
                    .map(char::len_utf8)
                    .sum();
                self.pos += len;
                Ok(Term::Atom(Label::from(&self.text[start..self.pos])))
            }
            _ => Err(self.unexpected("expected a term")),
        }
    }
}

/// Parses the term grammar: `;` binds tighter than `|`, which binds tighter
/// than `+`; all three are left-associative. `[t]` boxes, `0` and `1` are
/// constants.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = TermParser { text, pos: 0 };
    let t = p.join()?;
    if p.peek().is_some() {
        return Err(p.unexpected("unexpected trailing input"));
    }
    Ok(t)
}

/// Parses a term and rejects `0` and `+`.
pub fn parse_sp_term(text: &str) -> Result<SpTerm, ParseError> {
    parse_term(text)?
        .to_sp()
        .ok_or_else(|| ParseError::new(0, "term uses 0 or +, which series-parallel terms exclude"))
}

fn precedence(t: &Term) -> u8 {
    match t {
        Term::Join(..) => 0,
        Term::Par(..) => 1,
        Term::Seq(..) => 2,
        _ => 3,
    }
}

fn render(t: &Term, out: &mut String) {
    let binary = |out: &mut String, level: u8, op: &str, a: &Term, b: &Term| {
        wrap(a, precedence(a) < level, out);
        out.push_str(op);
        wrap(b, precedence(b) <= level, out);
    };
    match t {
        Term::Zero => out.push('0'),
        Term::One => out.push('1'),
        Term::Atom(a) => out.push_str(a.as_str()),
        Term::Seq(a, b) => binary(out, 2, ";", a, b),
        Term::Par(a, b) => binary(out, 1, " | ", a, b),
        Term::Join(a, b) => binary(out, 0, " + ", a, b),
        Term::Box(a) => {
            out.push('[');
            render(a, out);
            out.push(']');
        }
    }
}

fn wrap(t: &Term, parens: bool, out: &mut String) {
    if parens {
        out.push('(');
        render(t, out);
        out.push(')');
    } else {
        render(t, out);
    }
}

pub fn render_term(t: &Term) -> String {
    let mut s = String::new();
    render(t, &mut s);
    s
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_term(self))
    }
}

impl fmt::Display for SpTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_term(&Term::from(self.clone())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn precedence_and_associativity() {
        let (a, b, c) = (Term::atom("a"), Term::atom("b"), Term::atom("c"));
        assert_eq!(t("a;b|c"), a.clone().seq(b.clone()).par(c.clone()));
        assert_eq!(
            t("[a];[b]+1"),
            a.clone().boxed().seq(b.clone().boxed()).join(Term::One)
        );
        assert_eq!(t("a;b;c"), a.clone().seq(b.clone()).seq(c.clone()));
        assert_eq!(t("a;(b;c)"), a.clone().seq(b.clone().seq(c.clone())));
        assert_eq!(t("a|b+c|a"), a.clone().par(b).join(c.par(a)));
        assert_eq!(t(" 0 ; ( 1 ) "), Term::Zero.seq(Term::One));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_term("a;;b").unwrap_err();
        assert_eq!(e.position, 2);
        let e = parse_term("[a;b").unwrap_err();
        assert_eq!(e.position, 4);
        assert!(parse_term("a b").is_err());
        assert!(parse_term("").is_err());
        assert!(parse_sp_term("a+b").is_err());
    }

    #[test]
    fn rendering_round_trips() {
        for s in [
            "a;b|c",
            "a;(b;c)",
            "(a|b);(c|d)",
            "a|(b|c)",
            "[a+b];0 + 1",
            "(a+b)|c",
            "[[a]]",
            "a;[b|c;d]+(e+f)",
        ] {
            let term = t(s);
            let again = t(&render_term(&term));
            assert_eq!(term, again, "{s} rendered as {}", render_term(&term));
        }
        assert_eq!(render_term(&t("(a;b);c")), "a;b;c");
        assert_eq!(render_term(&t("a;(b|c)")), "a;(b | c)");
    }

    #[test]
    fn substitution() {
        let sigma = |l: &Label| (l.as_str() == "x").then(|| t("a;b"));
        assert_eq!(substitute_term(&t("x|x"), &sigma), t("(a;b)|(a;b)"));
        assert_eq!(substitute_term(&t("x+y"), &sigma), t("a;b+y"));
    }
}
