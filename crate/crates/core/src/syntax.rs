//! LTL abstract syntax, concrete syntax, positive normal form and formal
//! conjunctions.
//!
//! The derived `Ord` on [`Formula`] is the total formula order used
//! everywhere a canonical form is needed. Variants are declared in rank
//! order, so two formulas compare first by constructor rank, then
//! lexicographically on their children, with atoms ordered by name.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// An LTL formula.
///
/// Variant order is significant: it fixes the constructor rank of the
/// total formula order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Formula {
    False,
    True,
    Atom(String),
    Not(Box<Formula>),
    Next(Box<Formula>),
    Eventually(Box<Formula>),
    Always(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn next(f: Formula) -> Self {
        Formula::Next(Box::new(f))
    }

    pub fn eventually(f: Formula) -> Self {
        Formula::Eventually(Box::new(f))
    }

    pub fn always(f: Formula) -> Self {
        Formula::Always(Box::new(f))
    }

    pub fn until(lhs: Formula, rhs: Formula) -> Self {
        Formula::Until(Box::new(lhs), Box::new(rhs))
    }

    pub fn release(lhs: Formula, rhs: Formula) -> Self {
        Formula::Release(Box::new(lhs), Box::new(rhs))
    }

    pub fn and(lhs: Formula, rhs: Formula) -> Self {
        Formula::And(Box::new(lhs), Box::new(rhs))
    }

    pub fn or(lhs: Formula, rhs: Formula) -> Self {
        Formula::Or(Box::new(lhs), Box::new(rhs))
    }

    /// Left-nested conjunction of `items`; `tt` when empty.
    pub fn conjunction(items: impl IntoIterator<Item = Formula>) -> Self {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    /// Left-nested disjunction of `items`; `ff` when empty.
    pub fn disjunction(items: impl IntoIterator<Item = Formula>) -> Self {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::False)
    }

    pub fn is_literal(&self) -> bool {
        match self {
            Formula::Atom(_) => true,
            Formula::Not(inner) => matches!(**inner, Formula::Atom(_)),
            _ => false,
        }
    }

    /// A temporal formula does not start with a conjunction or disjunction.
    pub fn is_temporal(&self) -> bool {
        !matches!(self, Formula::And(..) | Formula::Or(..))
    }

    /// Negation occurs only directly in front of atoms.
    pub fn is_pnf(&self) -> bool {
        match self {
            Formula::False | Formula::True | Formula::Atom(_) => true,
            Formula::Not(inner) => matches!(**inner, Formula::Atom(_)),
            Formula::Next(f) | Formula::Eventually(f) | Formula::Always(f) => f.is_pnf(),
            Formula::Until(a, b)
            | Formula::Release(a, b)
            | Formula::And(a, b)
            | Formula::Or(a, b) => a.is_pnf() && b.is_pnf(),
        }
    }

    /// Number of literals, constants, temporal and Boolean operators.
    /// A negated atom counts as one literal.
    pub fn size(&self) -> usize {
        match self {
            Formula::False | Formula::True | Formula::Atom(_) => 1,
            Formula::Not(inner) if matches!(**inner, Formula::Atom(_)) => 1,
            Formula::Not(f) | Formula::Next(f) | Formula::Eventually(f) | Formula::Always(f) => {
                1 + f.size()
            }
            Formula::Until(a, b)
            | Formula::Release(a, b)
            | Formula::And(a, b)
            | Formula::Or(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn subformulae(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.collect_subformulae(&mut out);
        out
    }

    fn collect_subformulae(&self, out: &mut BTreeSet<Formula>) {
        if !out.insert(self.clone()) {
            return;
        }
        match self {
            Formula::False | Formula::True | Formula::Atom(_) => {}
            Formula::Not(f) | Formula::Next(f) | Formula::Eventually(f) | Formula::Always(f) => {
                f.collect_subformulae(out)
            }
            Formula::Until(a, b)
            | Formula::Release(a, b)
            | Formula::And(a, b)
            | Formula::Or(a, b) => {
                a.collect_subformulae(out);
                b.collect_subformulae(out);
            }
        }
    }

    /// Atomic propositions occurring in the formula, sorted.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::False | Formula::True => {}
            Formula::Atom(name) => {
                out.insert(name.clone());
            }
            Formula::Not(f) | Formula::Next(f) | Formula::Eventually(f) | Formula::Always(f) => {
                f.collect_atoms(out)
            }
            Formula::Until(a, b)
            | Formula::Release(a, b)
            | Formula::And(a, b)
            | Formula::Or(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// The operands of a nest of conjunctions, left to right.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            match f {
                Formula::And(a, b) => {
                    stack.push(b);
                    stack.push(a);
                }
                other => out.push(other),
            }
        }
        out
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Or(..) => 1,
            Formula::And(..) => 2,
            Formula::Until(..) | Formula::Release(..) => 3,
            Formula::Not(_) | Formula::Next(_) | Formula::Eventually(_) | Formula::Always(_) => 4,
            Formula::False | Formula::True | Formula::Atom(_) => 5,
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, operand: &Formula, min_prec: u8) -> fmt::Result {
    if operand.precedence() < min_prec {
        write!(f, "({operand})")
    } else {
        write!(f, "{operand}")
    }
}

/// Minimal-parentheses rendering. `&` and `|` associate to the left,
/// `U` and `R` to the right, mirroring the parser.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::False => f.write_str("ff"),
            Formula::True => f.write_str("tt"),
            Formula::Atom(name) => f.write_str(name),
            Formula::Not(inner) => {
                f.write_str("!")?;
                write_operand(f, inner, 4)
            }
            Formula::Next(inner) | Formula::Eventually(inner) | Formula::Always(inner) => {
                let op = match self {
                    Formula::Next(_) => "X",
                    Formula::Eventually(_) => "F",
                    _ => "G",
                };
                write!(f, "{op} ")?;
                write_operand(f, inner, 4)
            }
            Formula::Until(a, b) | Formula::Release(a, b) => {
                let op = if matches!(self, Formula::Until(..)) { "U" } else { "R" };
                write_operand(f, a, 4)?;
                write!(f, " {op} ")?;
                write_operand(f, b, 3)
            }
            Formula::And(a, b) => {
                write_operand(f, a, 2)?;
                f.write_str(" & ")?;
                write_operand(f, b, 3)
            }
            Formula::Or(a, b) => {
                write_operand(f, a, 1)?;
                f.write_str(" | ")?;
                write_operand(f, b, 2)
            }
        }
    }
}

/// Renders a formula in the concrete syntax accepted by [`parse`].
pub fn print(f: &Formula) -> String {
    f.to_string()
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at line {line}, column {column}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    True,
    False,
    Ident(String),
    Not,
    And,
    Or,
    Next,
    Eventually,
    Always,
    Until,
    Release,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::True => f.write_str("'tt'"),
            Token::False => f.write_str("'ff'"),
            Token::Ident(name) => write!(f, "identifier '{name}'"),
            Token::Not => f.write_str("'!'"),
            Token::And => f.write_str("'&'"),
            Token::Or => f.write_str("'|'"),
            Token::Next => f.write_str("'X'"),
            Token::Eventually => f.write_str("'F'"),
            Token::Always => f.write_str("'G'"),
            Token::Until => f.write_str("'U'"),
            Token::Release => f.write_str("'R'"),
            Token::LParen => f.write_str("'('"),
            Token::RParen => f.write_str("')'"),
            Token::End => f.write_str("end of input"),
        }
    }
}

struct Lexed {
    token: Token,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Lexed>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut column) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_column) = (line, column);
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            column += 1;
            i += 1;
            continue;
        }
        let single = match c {
            '!' => Some(Token::Not),
            '&' => Some(Token::And),
            '|' => Some(Token::Or),
            'X' => Some(Token::Next),
            'F' => Some(Token::Eventually),
            'G' => Some(Token::Always),
            'U' => Some(Token::Until),
            'R' => Some(Token::Release),
            '(' => Some(Token::LParen),
            ')' => Some(Token::RParen),
            _ => None,
        };
        if let Some(token) = single {
            out.push(Lexed { token, line, column });
            i += 1;
            column += 1;
            continue;
        }
        if c.is_ascii_lowercase() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            column += i - start;
            let token = match word.as_str() {
                "tt" => Token::True,
                "ff" => Token::False,
                _ => Token::Ident(word),
            };
            out.push(Lexed {
                token,
                line: start_line,
                column: start_column,
            });
            continue;
        }
        return Err(ParseError {
            line,
            column,
            expected: vec!["a formula token".into()],
            found: format!("character '{c}'"),
        });
    }
    out.push(Lexed {
        token: Token::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    tokens: Vec<Lexed>,
    pos: usize,
}

const OPERAND_START: &[&str] = &["'!'", "'X'", "'F'", "'G'", "'tt'", "'ff'", "identifier", "'('"];

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].token
    }

    fn bump(&mut self) -> Token {
        let token = self.tokens[self.pos].token.clone();
        if token != Token::End {
            self.pos += 1;
        }
        token
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let here = &self.tokens[self.pos];
        ParseError {
            line: here.line,
            column: here.column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: here.token.to_string(),
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Token::Or {
            self.bump();
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.binary()?;
        while *self.peek() == Token::And {
            self.bump();
            lhs = Formula::and(lhs, self.binary()?);
        }
        Ok(lhs)
    }

    fn binary(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        match self.peek() {
            Token::Until => {
                self.bump();
                Ok(Formula::until(lhs, self.binary()?))
            }
            Token::Release => {
                self.bump();
                Ok(Formula::release(lhs, self.binary()?))
            }
            _ => Ok(lhs),
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Token::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Token::Next => {
                self.bump();
                Ok(Formula::next(self.unary()?))
            }
            Token::Eventually => {
                self.bump();
                Ok(Formula::eventually(self.unary()?))
            }
            Token::Always => {
                self.bump();
                Ok(Formula::always(self.unary()?))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Token::True => {
                self.bump();
                Ok(Formula::True)
            }
            Token::False => {
                self.bump();
                Ok(Formula::False)
            }
            Token::Ident(name) => {
                self.bump();
                Ok(Formula::Atom(name))
            }
            Token::LParen => {
                self.bump();
                let inner = self.or()?;
                if *self.peek() != Token::RParen {
                    return Err(self.error(&["'&'", "'|'", "'U'", "'R'", "')'"]));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.error(OPERAND_START)),
        }
    }
}

/// Parses the concrete formula syntax.
///
/// Precedence from tightest: `!` `X` `F` `G`, then `U` `R` (right
/// associative), then `&`, then `|`.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut parser = Parser {
        tokens: lex(text)?,
        pos: 0,
    };
    let f = parser.or()?;
    if *parser.peek() != Token::End {
        return Err(parser.error(&["'&'", "'|'", "'U'", "'R'", "end of input"]));
    }
    Ok(f)
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

// ---------------------------------------------------------------------------
// Positive normal form

/// A formula in positive normal form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pnf(Formula);

impl Pnf {
    /// Wraps `f` if it already is in positive normal form.
    pub fn new(f: Formula) -> Option<Self> {
        f.is_pnf().then_some(Pnf(f))
    }

    pub fn into_inner(self) -> Formula {
        self.0
    }
}

impl Deref for Pnf {
    type Target = Formula;

    fn deref(&self) -> &Formula {
        &self.0
    }
}

impl fmt::Display for Pnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Pushes negations down to the atoms with the de Morgan laws and the
/// dualities `U`/`R`, `F`/`G` and the self-duality of `X`. Linear in the
/// size of `f`.
pub fn to_pnf(f: &Formula) -> Pnf {
    Pnf(push(f, false))
}

fn push(f: &Formula, negate: bool) -> Formula {
    use Formula::*;
    match (f, negate) {
        (False, false) | (True, true) => False,
        (True, false) | (False, true) => True,
        (Atom(_), false) => f.clone(),
        (Atom(_), true) => Formula::not(f.clone()),
        (Not(inner), _) => push(inner, !negate),
        (Next(inner), _) => Formula::next(push(inner, negate)),
        (Eventually(inner), false) => Formula::eventually(push(inner, false)),
        (Eventually(inner), true) => Formula::always(push(inner, true)),
        (Always(inner), false) => Formula::always(push(inner, false)),
        (Always(inner), true) => Formula::eventually(push(inner, true)),
        (Until(a, b), false) => Formula::until(push(a, false), push(b, false)),
        (Until(a, b), true) => Formula::release(push(a, true), push(b, true)),
        (Release(a, b), false) => Formula::release(push(a, false), push(b, false)),
        (Release(a, b), true) => Formula::until(push(a, true), push(b, true)),
        (And(a, b), false) => Formula::and(push(a, false), push(b, false)),
        (And(a, b), true) => Formula::or(push(a, true), push(b, true)),
        (Or(a, b), false) => Formula::or(push(a, false), push(b, false)),
        (Or(a, b), true) => Formula::and(push(a, true), push(b, true)),
    }
}

// ---------------------------------------------------------------------------
// Formal conjunctions

/// A normalized conjunction of temporal formulas: strictly ascending in the
/// formula order, never containing `tt`. The empty conjunction is the unit
/// `⊤` and prints as `tt`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormalConjunction(Vec<Formula>);

impl FormalConjunction {
    pub fn top() -> Self {
        FormalConjunction(Vec::new())
    }

    /// The singleton conjunction of a temporal formula (`⊤` for `tt`).
    pub fn singleton(f: Formula) -> Self {
        debug_assert!(f.is_temporal(), "{f} is not a temporal formula");
        if f == Formula::True {
            Self::top()
        } else {
            FormalConjunction(vec![f])
        }
    }

    pub fn from_formulas(items: impl IntoIterator<Item = Formula>) -> Self {
        let set: BTreeSet<Formula> = items.into_iter().filter(|f| *f != Formula::True).collect();
        debug_assert!(set.iter().all(Formula::is_temporal));
        FormalConjunction(set.into_iter().collect())
    }

    pub fn is_top(&self) -> bool {
        self.0.is_empty()
    }

    pub fn elems(&self) -> &[Formula] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Formula> {
        self.0.iter()
    }

    /// `⊗`: sorted duplicate-free merge.
    pub fn conj(&self, other: &FormalConjunction) -> FormalConjunction {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(a[i].clone());
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        FormalConjunction(out)
    }

    /// Adds one temporal formula.
    pub fn with(&self, f: &Formula) -> FormalConjunction {
        self.conj(&FormalConjunction::singleton(f.clone()))
    }

    /// The conjunction as a formula: `tt` when empty, otherwise a
    /// left-nested `&` chain in canonical order.
    pub fn to_formula(&self) -> Formula {
        Formula::conjunction(self.0.iter().cloned())
    }

    /// Printed elements, the structured-output form (`[]` is `⊤`).
    pub fn printed(&self) -> Vec<String> {
        self.0.iter().map(ToString::to_string).collect()
    }
}

impl fmt::Display for FormalConjunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_formula().fmt(f)
    }
}

impl<'a> IntoIterator for &'a FormalConjunction {
    type Item = &'a Formula;
    type IntoIter = std::slice::Iter<'a, Formula>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Free-function form of `⊗`.
pub fn conj(a: &FormalConjunction, b: &FormalConjunction) -> FormalConjunction {
    a.conj(b)
}
