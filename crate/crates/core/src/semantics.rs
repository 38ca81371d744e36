//! Lasso-word semantics: the ground truth every construction is checked
//! against.
//!
//! A lasso `u·vω` is evaluated on its finite position ring of size
//! `|u| + |v|`, where the successor of the last position is `|u|`. Until and
//! Release are the least and greatest fixpoints of their one-step
//! expansions over that ring.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::Formula;

/// One letter of a word: the set of propositions that hold.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Symbol(BTreeSet<String>);

impl Symbol {
    pub fn empty() -> Self {
        Symbol(BTreeSet::new())
    }

    pub fn new<S: Into<String>>(props: impl IntoIterator<Item = S>) -> Self {
        Symbol(props.into_iter().map(Into::into).collect())
    }

    pub fn contains(&self, prop: &str) -> bool {
        self.0.contains(prop)
    }

    pub fn props(&self) -> &BTreeSet<String> {
        &self.0
    }

    pub fn is_subset_of(&self, aps: &BTreeSet<String>) -> bool {
        self.0.is_subset(aps)
    }

    /// Every symbol over `aps`, in ascending bitmask order of the sorted
    /// proposition list (`{}` first).
    pub fn alphabet(aps: &BTreeSet<String>) -> Vec<Symbol> {
        let aps: Vec<&String> = aps.iter().collect();
        assert!(aps.len() < 24, "alphabet over {} propositions is too large", aps.len());
        (0u32..1 << aps.len())
            .map(|mask| {
                Symbol(
                    aps.iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, p)| (*p).clone())
                        .collect(),
                )
            })
            .collect()
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(p)?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LassoError {
    #[error("the loop of a lasso must contain at least one symbol")]
    EmptyLoop,
    #[error("expected exactly one ';' separating prefix and loop")]
    MissingSeparator,
    #[error("malformed symbol '{0}': expected '{{}}' or '{{p,q}}'")]
    BadSymbol(String),
}

/// The ultimately periodic word `prefix · loopω`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LassoWord {
    prefix: Vec<Symbol>,
    cycle: Vec<Symbol>,
}

impl LassoWord {
    pub fn new(prefix: Vec<Symbol>, cycle: Vec<Symbol>) -> Result<Self, LassoError> {
        if cycle.is_empty() {
            return Err(LassoError::EmptyLoop);
        }
        Ok(LassoWord { prefix, cycle })
    }

    pub fn prefix(&self) -> &[Symbol] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[Symbol] {
        &self.cycle
    }

    /// Number of distinct positions: `|prefix| + |loop|`.
    pub fn ring_len(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    /// Successor of a ring position.
    pub fn succ(&self, i: usize) -> usize {
        if i + 1 < self.ring_len() {
            i + 1
        } else {
            self.prefix.len()
        }
    }

    pub fn symbol_at(&self, i: usize) -> &Symbol {
        if i < self.prefix.len() {
            &self.prefix[i]
        } else {
            &self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// Propositions mentioned anywhere in the word.
    pub fn props(&self) -> BTreeSet<String> {
        self.prefix
            .iter()
            .chain(&self.cycle)
            .flat_map(|s| s.props().iter().cloned())
            .collect()
    }

    /// The word without its first symbol, as a lasso.
    pub fn tail(&self) -> LassoWord {
        if let Some((_, rest)) = self.prefix.split_first() {
            LassoWord {
                prefix: rest.to_vec(),
                cycle: self.cycle.clone(),
            }
        } else {
            let mut cycle = self.cycle.clone();
            cycle.rotate_left(1);
            LassoWord {
                prefix: Vec::new(),
                cycle,
            }
        }
    }

    /// Parses `u1 u2 ... ; v1 v2 ...` where every symbol is `{}` or `{p,q}`.
    pub fn parse(text: &str) -> Result<Self, LassoError> {
        let mut parts = text.split(';');
        let (prefix, cycle) = match (parts.next(), parts.next(), parts.next()) {
            (Some(u), Some(v), None) => (u, v),
            _ => return Err(LassoError::MissingSeparator),
        };
        LassoWord::new(parse_symbols(prefix)?, parse_symbols(cycle)?)
    }
}

/// Parses a single symbol such as `{p,q}`.
pub fn parse_symbol(text: &str) -> Result<Symbol, LassoError> {
    let mut symbols = parse_symbols(text)?;
    if symbols.len() != 1 {
        return Err(LassoError::BadSymbol(text.trim().to_string()));
    }
    Ok(symbols.remove(0))
}

fn parse_symbols(text: &str) -> Result<Vec<Symbol>, LassoError> {
    let mut out = Vec::new();
    let mut rest = text.trim_start();
    while !rest.is_empty() {
        let bad = || LassoError::BadSymbol(rest.split_whitespace().next().unwrap_or("").to_string());
        if !rest.starts_with('{') {
            return Err(bad());
        }
        let close = rest.find('}').ok_or_else(bad)?;
        let body = &rest[1..close];
        let mut props = BTreeSet::new();
        for item in body.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let valid = item.starts_with(|c: char| c.is_ascii_lowercase())
                && item.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(LassoError::BadSymbol(rest[..=close].to_string()));
            }
            props.insert(item.to_string());
        }
        out.push(Symbol(props));
        rest = rest[close + 1..].trim_start();
    }
    Ok(out)
}

impl fmt::Display for LassoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |syms: &[Symbol]| syms.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
        if self.prefix.is_empty() {
            write!(f, "; {}", join(&self.cycle))
        } else {
            write!(f, "{} ; {}", join(&self.prefix), join(&self.cycle))
        }
    }
}

/// `i`-th symbol of `w`.
pub fn symbol_at(w: &LassoWord, i: usize) -> &Symbol {
    w.symbol_at(i)
}

/// Does `prefix · loopω` satisfy `f`? Accepts formulas with arbitrary
/// negation.
pub fn eval_lasso(f: &Formula, w: &LassoWord) -> bool {
    eval_ring(f, w)[0]
}

/// Truth value of `f` at every ring position of `w`.
pub fn eval_ring(f: &Formula, w: &LassoWord) -> Vec<bool> {
    let n = w.ring_len();
    match f {
        Formula::False => vec![false; n],
        Formula::True => vec![true; n],
        Formula::Atom(p) => (0..n).map(|i| w.symbol_at(i).contains(p)).collect(),
        Formula::Not(g) => eval_ring(g, w).into_iter().map(|b| !b).collect(),
        Formula::And(a, b) => zip_with(eval_ring(a, w), eval_ring(b, w), |x, y| x && y),
        Formula::Or(a, b) => zip_with(eval_ring(a, w), eval_ring(b, w), |x, y| x || y),
        Formula::Next(g) => {
            let inner = eval_ring(g, w);
            (0..n).map(|i| inner[w.succ(i)]).collect()
        }
        Formula::Until(a, b) => until_fixpoint(&eval_ring(a, w), &eval_ring(b, w), w),
        Formula::Release(a, b) => release_fixpoint(&eval_ring(a, w), &eval_ring(b, w), w),
        Formula::Eventually(g) => until_fixpoint(&vec![true; n], &eval_ring(g, w), w),
        Formula::Always(g) => release_fixpoint(&vec![false; n], &eval_ring(g, w), w),
    }
}

fn zip_with(a: Vec<bool>, b: Vec<bool>, op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect()
}

/// Least fixpoint of `v = rhs ∨ (lhs ∧ X v)`.
fn until_fixpoint(lhs: &[bool], rhs: &[bool], w: &LassoWord) -> Vec<bool> {
    let n = w.ring_len();
    let mut val = vec![false; n];
    loop {
        let mut changed = false;
        for i in (0..n).rev() {
            let v = rhs[i] || (lhs[i] && val[w.succ(i)]);
            if v != val[i] {
                val[i] = v;
                changed = true;
            }
        }
        if !changed {
            return val;
        }
    }
}

/// Greatest fixpoint of `v = rhs ∧ (lhs ∨ X v)`.
fn release_fixpoint(lhs: &[bool], rhs: &[bool], w: &LassoWord) -> Vec<bool> {
    let n = w.ring_len();
    let mut val = vec![true; n];
    loop {
        let mut changed = false;
        for i in (0..n).rev() {
            let v = rhs[i] && (lhs[i] || val[w.succ(i)]);
            if v != val[i] {
                val[i] = v;
                changed = true;
            }
        }
        if !changed {
            return val;
        }
    }
}

/// Every lasso over `P(aps)` with `|prefix| ≤ max_prefix` and
/// `1 ≤ |loop| ≤ max_loop`, ordered by total length, then prefix length,
/// then lexicographically on symbols.
pub fn enumerate_lassos(
    aps: &BTreeSet<String>,
    max_prefix: usize,
    max_loop: usize,
) -> impl Iterator<Item = LassoWord> {
    let alphabet = Symbol::alphabet(aps);
    let mut shapes = Vec::new();
    for total in 1..=max_prefix + max_loop {
        for prefix_len in 0..=max_prefix.min(total - 1) {
            let loop_len = total - prefix_len;
            if (1..=max_loop).contains(&loop_len) {
                shapes.push((prefix_len, loop_len));
            }
        }
    }
    shapes.into_iter().flat_map(move |(prefix_len, loop_len)| {
        let alphabet = alphabet.clone();
        words(alphabet.len(), prefix_len + loop_len).map(move |digits| {
            let syms: Vec<Symbol> = digits.iter().map(|&d| alphabet[d].clone()).collect();
            let (u, v) = syms.split_at(prefix_len);
            LassoWord {
                prefix: u.to_vec(),
                cycle: v.to_vec(),
            }
        })
    })
}

/// All digit strings of length `len` over `0..base`, lexicographically.
fn words(base: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut next = Some(vec![0; len]);
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut succ = current.clone();
        let mut i = len;
        while i > 0 {
            i -= 1;
            succ[i] += 1;
            if succ[i] < base {
                next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(current)
    })
}

/// Bounded model search. Absence of a result does not prove
/// unsatisfiability.
pub fn sat_search_bounded(
    f: &Formula,
    aps: &BTreeSet<String>,
    max_prefix: usize,
    max_loop: usize,
) -> Option<LassoWord> {
    enumerate_lassos(aps, max_prefix, max_loop).find(|w| eval_lasso(f, w))
}
