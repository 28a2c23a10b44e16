//! Propositional language: syntax trees, parsing, pretty-printing,
//! vocabularies and interpretations.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Whether an atom describes the world or is under the agent's control.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum AtomKind {
    State,
    Decision,
}

/// A propositional formula. Leaves are atoms (lowercase identifiers) or the
/// constants `true`/`false`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Formula {
    True,
    False,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// The negation, without any simplification.
    pub fn negated(&self) -> Formula {
        match self {
            Formula::Not(inner) => (**inner).clone(),
            other => Formula::not(other.clone()),
        }
    }

    /// Collects the atom names occurring in the formula.
    pub fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            Formula::Not(f) => f.collect_atoms(out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }
}

// Precedence levels for printing and parsing: higher binds tighter.
const PREC_IFF: u8 = 1;
const PREC_IMPLIES: u8 = 2;
const PREC_OR: u8 = 3;
const PREC_AND: u8 = 4;
const PREC_NOT: u8 = 5;

fn fmt_prec(f: &Formula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let prec = match f {
        Formula::True | Formula::False | Formula::Atom(_) => u8::MAX,
        Formula::Not(_) => PREC_NOT,
        Formula::And(_, _) => PREC_AND,
        Formula::Or(_, _) => PREC_OR,
        Formula::Implies(_, _) => PREC_IMPLIES,
        Formula::Iff(_, _) => PREC_IFF,
    };
    let parens = prec < min;
    if parens {
        write!(out, "(")?;
    }
    match f {
        Formula::True => write!(out, "true")?,
        Formula::False => write!(out, "false")?,
        Formula::Atom(a) => write!(out, "{a}")?,
        Formula::Not(x) => {
            write!(out, "~")?;
            fmt_prec(x, PREC_NOT, out)?;
        }
        // `&` and `|` are associative: both children print at the
        // operator's own level, so chains stay paren-free.
        Formula::And(a, b) => {
            fmt_prec(a, PREC_AND, out)?;
            write!(out, " & ")?;
            fmt_prec(b, PREC_AND, out)?;
        }
        Formula::Or(a, b) => {
            fmt_prec(a, PREC_OR, out)?;
            write!(out, " | ")?;
            fmt_prec(b, PREC_OR, out)?;
        }
        // right-associative
        Formula::Implies(a, b) => {
            fmt_prec(a, PREC_IMPLIES + 1, out)?;
            write!(out, " -> ")?;
            fmt_prec(b, PREC_IMPLIES, out)?;
        }
        Formula::Iff(a, b) => {
            fmt_prec(a, PREC_IFF, out)?;
            write!(out, " <-> ")?;
            fmt_prec(b, PREC_IFF + 1, out)?;
        }
    }
    if parens {
        write!(out, ")")?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_prec(self, 0, f)
    }
}

#[derive(Clone, PartialEq, Debug)]
enum Tok {
    Atom(String),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    Eof,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, pos: 0, line: 1, col: 1 }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { line: self.line, col: self.col, msg: msg.into() }
    }

    fn bump(&mut self, n: usize) {
        for c in self.src[self.pos..self.pos + n].chars() {
            if c == '\n' {
                self.line += 1;
                self.col = 1;
            } else {
                self.col += 1;
            }
        }
        self.pos += n;
    }

    fn next_tok(&mut self) -> Result<(Tok, usize, usize)> {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.bump(c.len_utf8());
            } else {
                break;
            }
        }
        let (line, col) = (self.line, self.col);
        let rest = &self.src[self.pos..];
        let Some(c) = rest.chars().next() else {
            return Ok((Tok::Eof, line, col));
        };
        let tok = match c {
            '~' => {
                self.bump(1);
                Tok::Not
            }
            '&' => {
                self.bump(1);
                Tok::And
            }
            '|' => {
                self.bump(1);
                Tok::Or
            }
            '(' => {
                self.bump(1);
                Tok::LParen
            }
            ')' => {
                self.bump(1);
                Tok::RParen
            }
            '-' => {
                if rest.starts_with("->") {
                    self.bump(2);
                    Tok::Implies
                } else {
                    return Err(self.err("expected `->`"));
                }
            }
            '<' => {
                if rest.starts_with("<->") {
                    self.bump(3);
                    Tok::Iff
                } else {
                    return Err(self.err("expected `<->`"));
                }
            }
            'a'..='z' | '_' => {
                let end = rest
                    .find(|c: char| !(c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_'))
                    .unwrap_or(rest.len());
                let name = &rest[..end];
                self.bump(end);
                match name {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    _ => Tok::Atom(name.to_string()),
                }
            }
            _ => return Err(self.err(format!("unexpected character `{c}`"))),
        };
        Ok((tok, line, col))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    line: usize,
    col: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self> {
        let mut lexer = Lexer::new(src);
        let (tok, line, col) = lexer.next_tok()?;
        Ok(Parser { lexer, tok, line, col })
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { line: self.line, col: self.col, msg: msg.into() }
    }

    fn advance(&mut self) -> Result<()> {
        let (tok, line, col) = self.lexer.next_tok()?;
        self.tok = tok;
        self.line = line;
        self.col = col;
        Ok(())
    }

    // iff := implies (`<->` implies)*        (left-associative)
    fn iff(&mut self) -> Result<Formula> {
        let mut lhs = self.implies()?;
        while self.tok == Tok::Iff {
            self.advance()?;
            let rhs = self.implies()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    // implies := or (`->` implies)?          (right-associative)
    fn implies(&mut self) -> Result<Formula> {
        let lhs = self.or()?;
        if self.tok == Tok::Implies {
            self.advance()?;
            let rhs = self.implies()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula> {
        let mut lhs = self.and()?;
        while self.tok == Tok::Or {
            self.advance()?;
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while self.tok == Tok::And {
            self.advance()?;
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.tok.clone() {
            Tok::Not => {
                self.advance()?;
                Ok(Formula::not(self.unary()?))
            }
            Tok::True => {
                self.advance()?;
                Ok(Formula::True)
            }
            Tok::False => {
                self.advance()?;
                Ok(Formula::False)
            }
            Tok::Atom(name) => {
                self.advance()?;
                Ok(Formula::Atom(name))
            }
            Tok::LParen => {
                self.advance()?;
                let inner = self.iff()?;
                if self.tok != Tok::RParen {
                    return Err(self.err("expected `)`"));
                }
                self.advance()?;
                Ok(inner)
            }
            Tok::RParen => Err(self.err("unexpected `)`")),
            _ => Err(self.err("expected a formula")),
        }
    }
}

/// Parses a formula under the precedence `~ > & > | > -> > <->`,
/// with `->` right-associative.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut p = Parser::new(text)?;
    let f = p.iff()?;
    if p.tok != Tok::Eof {
        return Err(p.err("trailing input after formula"));
    }
    Ok(f)
}

/// Like [`parse_formula`], but rejects atoms undeclared in `vocab`.
pub fn parse_formula_strict(text: &str, vocab: &Vocabulary) -> Result<Formula> {
    let f = parse_formula(text)?;
    for a in f.atoms() {
        if !vocab.contains(&a) {
            return Err(Error::UnknownAtom(a));
        }
    }
    Ok(f)
}

/// The declared atoms of an instance, sorted by name. The sort order fixes
/// the canonical enumeration order of interpretations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Vocabulary {
    atoms: Vec<(String, AtomKind)>,
}

fn valid_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some('a'..='z' | '_'))
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

impl Vocabulary {
    pub fn new(
        state: impl IntoIterator<Item = String>,
        decision: impl IntoIterator<Item = String>,
    ) -> Result<Self> {
        let mut atoms: Vec<(String, AtomKind)> = Vec::new();
        for name in state {
            atoms.push((name, AtomKind::State));
        }
        for name in decision {
            atoms.push((name, AtomKind::Decision));
        }
        for (name, _) in &atoms {
            if !valid_atom_name(name) {
                return Err(Error::Vocab(format!("invalid atom name `{name}`")));
            }
        }
        atoms.sort();
        for w in atoms.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Vocab(format!(
                    "atom `{}` declared as both state and decision",
                    w[0].0
                )));
            }
        }
        Ok(Vocabulary { atoms })
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index(name).is_some()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.atoms.binary_search_by(|(a, _)| a.as_str().cmp(name)).ok()
    }

    pub fn kind(&self, name: &str) -> Option<AtomKind> {
        self.index(name).map(|i| self.atoms[i].1)
    }

    pub fn name(&self, index: usize) -> &str {
        &self.atoms[index].0
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, AtomKind)> {
        self.atoms.iter().map(|(n, k)| (n.as_str(), *k))
    }

    pub fn decision_atoms(&self) -> impl Iterator<Item = &str> {
        self.atoms
            .iter()
            .filter(|(_, k)| *k == AtomKind::Decision)
            .map(|(n, _)| n.as_str())
    }

    pub fn state_atoms(&self) -> impl Iterator<Item = &str> {
        self.atoms
            .iter()
            .filter(|(_, k)| *k == AtomKind::State)
            .map(|(n, _)| n.as_str())
    }
}

/// A total truth assignment over a vocabulary.
///
/// Interpretations are canonically ordered by their enumeration index:
/// lexicographic by atom name, with false < true.
#[derive(Clone, Debug)]
pub struct Interpretation {
    vocab: Arc<Vocabulary>,
    index: u64,
}

impl Interpretation {
    /// Builds the interpretation with the given canonical index. Atom `i`
    /// (in sorted order) is true iff bit `n-1-i` of the index is set.
    pub fn from_index(vocab: &Arc<Vocabulary>, index: u64) -> Self {
        debug_assert!(vocab.len() < 64 && index < (1u64 << vocab.len()));
        Interpretation { vocab: Arc::clone(vocab), index }
    }

    pub fn from_pairs(vocab: &Arc<Vocabulary>, pairs: &[(&str, bool)]) -> Self {
        let n = vocab.len();
        let mut index = 0u64;
        for (name, value) in pairs {
            let i = vocab
                .index(name)
                .unwrap_or_else(|| panic!("atom `{name}` not in vocabulary"));
            if *value {
                index |= 1 << (n - 1 - i);
            }
        }
        Interpretation { vocab: Arc::clone(vocab), index }
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn vocab(&self) -> &Arc<Vocabulary> {
        &self.vocab
    }

    /// Truth value of a declared atom. Panics on undeclared atoms; callers
    /// guarantee totality.
    pub fn truth(&self, name: &str) -> bool {
        let i = self
            .vocab
            .index(name)
            .unwrap_or_else(|| panic!("atom `{name}` not in vocabulary"));
        (self.index >> (self.vocab.len() - 1 - i)) & 1 == 1
    }
}

impl PartialEq for Interpretation {
    fn eq(&self, other: &Self) -> bool {
        self.index == other.index && self.vocab == other.vocab
    }
}

impl Eq for Interpretation {}

impl PartialOrd for Interpretation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Interpretation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.index.cmp(&other.index)
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (name, _)) in self.vocab.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let v = (self.index >> (self.vocab.len() - 1 - i)) & 1 == 1;
            write!(f, "{name}:{}", if v { "T" } else { "F" })?;
        }
        write!(f, "}}")
    }
}

/// Standard truth-functional evaluation of `phi` under `omega`.
pub fn evaluate(omega: &Interpretation, phi: &Formula) -> bool {
    match phi {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(a) => omega.truth(a),
        Formula::Not(f) => !evaluate(omega, f),
        Formula::And(a, b) => evaluate(omega, a) && evaluate(omega, b),
        Formula::Or(a, b) => evaluate(omega, a) || evaluate(omega, b),
        Formula::Implies(a, b) => !evaluate(omega, a) || evaluate(omega, b),
        Formula::Iff(a, b) => evaluate(omega, a) == evaluate(omega, b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_simple_implication() {
        assert_eq!(
            parse_formula("u -> l").unwrap(),
            Formula::implies(Formula::atom("u"), Formula::atom("l"))
        );
    }

    #[test]
    fn parse_umbrella_rules() {
        assert_eq!(
            parse_formula("(r & ~u) -> w").unwrap(),
            Formula::implies(
                Formula::and(Formula::atom("r"), Formula::not(Formula::atom("u"))),
                Formula::atom("w")
            )
        );
        assert_eq!(
            parse_formula("~r -> ~w").unwrap(),
            Formula::implies(
                Formula::not(Formula::atom("r")),
                Formula::not(Formula::atom("w"))
            )
        );
    }

    #[test]
    fn implies_is_right_associative() {
        assert_eq!(
            parse_formula("a -> b -> c").unwrap(),
            Formula::implies(
                Formula::atom("a"),
                Formula::implies(Formula::atom("b"), Formula::atom("c"))
            )
        );
    }

    #[test]
    fn precedence_not_and_or() {
        assert_eq!(
            parse_formula("~a & b | c").unwrap(),
            Formula::or(
                Formula::and(Formula::not(Formula::atom("a")), Formula::atom("b")),
                Formula::atom("c")
            )
        );
    }

    #[test]
    fn parse_error_has_position() {
        match parse_formula("a &\n& b") {
            Err(Error::Parse { line, col, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(col, 1);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn strict_mode_rejects_unknown_atoms() {
        let vocab = Vocabulary::new(vec!["a".into()], vec![]).unwrap();
        assert_eq!(
            parse_formula_strict("a -> b", &vocab),
            Err(Error::UnknownAtom("b".into()))
        );
    }

    #[test]
    fn printer_roundtrip_examples() {
        for src in [
            "u -> l",
            "(r & ~u) -> w",
            "~r -> ~w",
            "a & b & c",
            "a | b & c",
            "(a | b) & c",
            "a -> b -> c",
            "(a -> b) -> c",
            "~(a & b)",
            "a <-> b <-> c",
            "true",
            "false | x",
        ] {
            let f = parse_formula(src).unwrap();
            let printed = f.to_string();
            let reparsed = parse_formula(&printed).unwrap();
            assert_eq!(printed, reparsed.to_string(), "unstable print for {src}");
        }
    }

    #[test]
    fn evaluate_modus_ponens_rows() {
        let vocab = Arc::new(Vocabulary::new(vec!["l".into(), "u".into()], vec![]).unwrap());
        let f = parse_formula("u -> l").unwrap();
        let tt = Interpretation::from_pairs(&vocab, &[("u", true), ("l", true)]);
        let tf = Interpretation::from_pairs(&vocab, &[("u", true), ("l", false)]);
        assert!(evaluate(&tt, &f));
        assert!(!evaluate(&tf, &f));
    }

    #[test]
    fn evaluate_falsifying_row() {
        let vocab = Arc::new(Vocabulary::new(vec!["c".into(), "r".into()], vec![]).unwrap());
        let f = parse_formula("c -> r").unwrap();
        let omega = Interpretation::from_pairs(&vocab, &[("c", true), ("r", false)]);
        assert!(!evaluate(&omega, &f));
    }

    #[test]
    fn interpretation_order_is_lexicographic() {
        let vocab = Arc::new(Vocabulary::new(vec!["a".into(), "b".into()], vec![]).unwrap());
        // index 0 = {a:F, b:F}, 1 = {a:F, b:T}, 2 = {a:T, b:F}, 3 = {a:T, b:T}
        let i1 = Interpretation::from_index(&vocab, 1);
        assert!(!i1.truth("a"));
        assert!(i1.truth("b"));
        let i2 = Interpretation::from_index(&vocab, 2);
        assert!(i2.truth("a"));
        assert!(!i2.truth("b"));
        assert!(i1 < i2);
    }
}
