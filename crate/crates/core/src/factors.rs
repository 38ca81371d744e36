//! Monomials, the set-based conjunctive normal form and linear factors.
//!
//! A linear factor `⟨μ, φ⟩` reads "`μ` holds now and the formal
//! conjunction `φ` holds from the next step on". The linear factors of a
//! formula are read disjunctively, and their disjunction is equivalent to
//! the formula.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::semantics::Symbol;
use crate::syntax::{FormalConjunction, Formula};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub atom: String,
    pub negated: bool,
}

impl Literal {
    pub fn pos(atom: impl Into<String>) -> Self {
        Literal {
            atom: atom.into(),
            negated: false,
        }
    }

    pub fn neg(atom: impl Into<String>) -> Self {
        Literal {
            atom: atom.into(),
            negated: true,
        }
    }

    /// Reads a literal off `p` or `!p`.
    pub fn from_formula(f: &Formula) -> Option<Self> {
        match f {
            Formula::Atom(p) => Some(Literal::pos(p.clone())),
            Formula::Not(inner) => match &**inner {
                Formula::Atom(p) => Some(Literal::neg(p.clone())),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn complement(&self) -> Self {
        Literal {
            atom: self.atom.clone(),
            negated: !self.negated,
        }
    }

    pub fn to_formula(&self) -> Formula {
        let atom = Formula::atom(self.atom.clone());
        if self.negated {
            Formula::not(atom)
        } else {
            atom
        }
    }

    pub fn holds(&self, x: &Symbol) -> bool {
        x.contains(&self.atom) != self.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "!{}", self.atom)
        } else {
            f.write_str(&self.atom)
        }
    }
}

/// `ff`, or a non-contradictory set of literals (`tt` when empty).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Monomial {
    Bottom,
    Lits(BTreeSet<Literal>),
}

impl Monomial {
    pub fn tt() -> Self {
        Monomial::Lits(BTreeSet::new())
    }

    pub fn literal(lit: Literal) -> Self {
        Monomial::Lits(BTreeSet::from([lit]))
    }

    /// Builds the monomial of a literal collection; `Bottom` when it
    /// contains a complementary pair.
    pub fn from_literals(lits: impl IntoIterator<Item = Literal>) -> Self {
        let set: BTreeSet<Literal> = lits.into_iter().collect();
        if set.iter().any(|l| set.contains(&l.complement())) {
            Monomial::Bottom
        } else {
            Monomial::Lits(set)
        }
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, Monomial::Bottom)
    }

    pub fn literals(&self) -> impl Iterator<Item = &Literal> {
        match self {
            Monomial::Bottom => None,
            Monomial::Lits(lits) => Some(lits.iter()),
        }
        .into_iter()
        .flatten()
    }

    /// Printed literals, the structured-output form (`[]` is `tt`).
    pub fn printed(&self) -> Vec<String> {
        self.literals().map(ToString::to_string).collect()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        theta_monomial(self).fmt(f)
    }
}

/// The formula associated with a monomial.
pub fn theta_monomial(m: &Monomial) -> Formula {
    match m {
        Monomial::Bottom => Formula::False,
        Monomial::Lits(lits) => Formula::conjunction(lits.iter().map(Literal::to_formula)),
    }
}

/// Smart conjunction `⊓`: union of the literal sets, `Bottom` on conflict.
pub fn smart_and(a: &Monomial, b: &Monomial) -> Monomial {
    match (a, b) {
        (Monomial::Lits(x), Monomial::Lits(y)) => Monomial::from_literals(x.union(y).cloned()),
        _ => Monomial::Bottom,
    }
}

pub fn monomial_sat(x: &Symbol, m: &Monomial) -> bool {
    match m {
        Monomial::Bottom => false,
        Monomial::Lits(lits) => lits.iter().all(|l| l.holds(x)),
    }
}

/// The least symbol satisfying `m`: exactly its positive literals.
pub fn minimal_symbol(m: &Monomial) -> Option<Symbol> {
    match m {
        Monomial::Bottom => None,
        Monomial::Lits(lits) => Some(Symbol::new(
            lits.iter().filter(|l| !l.negated).map(|l| l.atom.clone()),
        )),
    }
}

/// `SIMP`: a PNF formula as a set of formal conjunctions read disjunctively.
pub fn simp(f: &Formula) -> BTreeSet<FormalConjunction> {
    match f {
        Formula::Or(a, b) => {
            let mut out = simp(a);
            out.extend(simp(b));
            out
        }
        Formula::And(a, b) => {
            let left = simp(a);
            let right = simp(b);
            left.iter()
                .flat_map(|l| right.iter().map(move |r| l.conj(r)))
                .collect()
        }
        temporal => BTreeSet::from([FormalConjunction::singleton(temporal.clone())]),
    }
}

/// A pair `⟨μ, φ⟩`; `μ` is never `Bottom`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearFactor {
    pub monomial: Monomial,
    pub next: FormalConjunction,
}

impl LinearFactor {
    pub fn new(monomial: Monomial, next: FormalConjunction) -> Self {
        debug_assert!(!monomial.is_bottom());
        LinearFactor { monomial, next }
    }

    pub fn record(&self) -> FactorRecord {
        FactorRecord {
            monomial: self.monomial.printed(),
            next: self.next.printed(),
        }
    }
}

impl fmt::Display for LinearFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{} | {}>", self.monomial, self.next)
    }
}

/// Structured form of one factor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorRecord {
    pub monomial: Vec<String>,
    pub next: Vec<String>,
}

/// Deduplicated factors, ordered by `(monomial, next)`.
pub type LinearFactorSet = BTreeSet<LinearFactor>;

fn product(a: &LinearFactorSet, b: &LinearFactorSet) -> LinearFactorSet {
    let mut out = LinearFactorSet::new();
    for x in a {
        for y in b {
            let m = smart_and(&x.monomial, &y.monomial);
            if !m.is_bottom() {
                out.insert(LinearFactor::new(m, x.next.conj(&y.next)));
            }
        }
    }
    out
}

fn with_next(factors: LinearFactorSet, extra: &Formula) -> impl Iterator<Item = LinearFactor> + '_ {
    factors
        .into_iter()
        .map(move |lf| LinearFactor::new(lf.monomial, lf.next.with(extra)))
}

/// Linear factors of a PNF formula.
///
/// # Panics
///
/// If `f` contains a negation that is not applied to an atom.
pub fn lf(f: &Formula) -> LinearFactorSet {
    match f {
        Formula::True => LinearFactorSet::from([LinearFactor::new(Monomial::tt(), FormalConjunction::top())]),
        Formula::False => LinearFactorSet::new(),
        Formula::Atom(_) | Formula::Not(_) => {
            let lit = Literal::from_formula(f)
                .unwrap_or_else(|| panic!("{f} is not in positive normal form"));
            LinearFactorSet::from([LinearFactor::new(Monomial::literal(lit), FormalConjunction::top())])
        }
        Formula::Or(a, b) => {
            let mut out = lf(a);
            out.extend(lf(b));
            out
        }
        Formula::And(a, b) => product(&lf(a), &lf(b)),
        Formula::Next(g) => simp(g)
            .into_iter()
            .map(|c| LinearFactor::new(Monomial::tt(), c))
            .collect(),
        Formula::Until(a, b) => {
            let mut out = lf(b);
            out.extend(with_next(lf(a), f));
            out
        }
        Formula::Release(a, b) => {
            let rhs = lf(b);
            let mut out = product(&lf(a), &rhs);
            out.extend(with_next(rhs, f));
            out
        }
        Formula::Eventually(g) => {
            let mut out = lf(g);
            out.insert(LinearFactor::new(Monomial::tt(), FormalConjunction::singleton(f.clone())));
            out
        }
        Formula::Always(g) => with_next(lf(g), f).collect(),
    }
}

/// Linear factors of a formal conjunction: the product of its elements'
/// factors (`{⟨tt, ⊤⟩}` for `⊤`).
pub fn lf_conj(c: &FormalConjunction) -> LinearFactorSet {
    c.iter().fold(lf(&Formula::True), |acc, q| product(&acc, &lf(q)))
}

/// The linear form `⋁ (Θ(μᵢ) ∧ X φᵢ)`; `ff` for the empty set.
pub fn theta_lf(s: &LinearFactorSet) -> Formula {
    Formula::disjunction(
        s.iter()
            .map(|lf| Formula::and(theta_monomial(&lf.monomial), Formula::next(lf.next.to_formula()))),
    )
}

pub fn factor_records(s: &LinearFactorSet) -> Vec<FactorRecord> {
    s.iter().map(LinearFactor::record).collect()
}
