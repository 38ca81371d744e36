//! Partial derivatives of LTL formulas.
//!
//! Two independent routes compute the derivative by a symbol: [`pderiv`]
//! goes through linear factors, [`rho`] recurses directly on the formula.
//! They agree on every formula.

use std::collections::BTreeSet;

use crate::factors::{lf, monomial_sat, simp, Literal};
use crate::semantics::Symbol;
use crate::syntax::{FormalConjunction, Formula};

/// A set of formal conjunctions, read disjunctively.
pub type DerivativeSet = BTreeSet<FormalConjunction>;

/// A set of temporal formulas, e.g. the iterated derivatives `∂⁺(φ)`.
pub type BaseSet = BTreeSet<Formula>;

fn product(a: &DerivativeSet, b: &DerivativeSet) -> DerivativeSet {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x.conj(y)))
        .collect()
}

fn top_set() -> DerivativeSet {
    DerivativeSet::from([FormalConjunction::top()])
}

/// Derivative of a single temporal formula through its linear factors.
pub fn pderiv_temporal(f: &Formula, x: &Symbol) -> DerivativeSet {
    lf(f)
        .into_iter()
        .filter(|factor| monomial_sat(x, &factor.monomial))
        .map(|factor| factor.next)
        .collect()
}

/// `∂c/x` of a formal conjunction: `{⊤}` for `⊤`, otherwise the
/// `⊗`-product of the elements' derivatives.
pub fn pderiv(c: &FormalConjunction, x: &Symbol) -> DerivativeSet {
    c.iter()
        .fold(top_set(), |acc, q| product(&acc, &pderiv_temporal(q, x)))
}

/// Direct partial derivative `ρ(f, x)` of a PNF formula.
pub fn rho(f: &Formula, x: &Symbol) -> DerivativeSet {
    match f {
        Formula::True => top_set(),
        Formula::False => DerivativeSet::new(),
        Formula::Atom(_) | Formula::Not(_) => {
            let lit = Literal::from_formula(f)
                .unwrap_or_else(|| panic!("{f} is not in positive normal form"));
            if lit.holds(x) {
                top_set()
            } else {
                DerivativeSet::new()
            }
        }
        Formula::Or(a, b) => {
            let mut out = rho(a, x);
            out.extend(rho(b, x));
            out
        }
        Formula::And(a, b) => product(&rho(a, x), &rho(b, x)),
        Formula::Next(g) => simp(g),
        Formula::Until(a, b) => {
            let mut out = rho(b, x);
            out.extend(rho(a, x).into_iter().map(|c| c.with(f)));
            out
        }
        Formula::Release(a, b) => {
            let rb = rho(b, x);
            let mut out = product(&rho(a, x), &rb);
            out.extend(rb.into_iter().map(|c| c.with(f)));
            out
        }
        Formula::Eventually(g) => {
            let mut out = rho(g, x);
            out.insert(FormalConjunction::singleton(f.clone()));
            out
        }
        Formula::Always(g) => rho(g, x).into_iter().map(|c| c.with(f)).collect(),
    }
}

/// `ρ` on a formal conjunction: the product over its elements.
pub fn rho_conj(c: &FormalConjunction, x: &Symbol) -> DerivativeSet {
    c.iter().fold(top_set(), |acc, q| product(&acc, &rho(q, x)))
}

/// `ρ(f, w)` for a finite word. The empty word yields `SIMP(f)`, the
/// normalized form of `{f}`.
pub fn rho_word(f: &Formula, w: &[Symbol]) -> DerivativeSet {
    let Some((first, rest)) = w.split_first() else {
        return simp(f);
    };
    rest.iter().fold(rho(f, first), |current, x| {
        current.iter().flat_map(|c| rho_conj(c, x)).collect()
    })
}

/// All partial derivative descendants `ρ(f, Σ*)` over the alphabet
/// `P(atoms(f))`.
pub fn descendants(f: &Formula) -> DerivativeSet {
    descendants_over(f, &Symbol::alphabet(&f.atoms()))
}

/// Descendant closure over an explicit alphabet.
pub fn descendants_over(f: &Formula, alphabet: &[Symbol]) -> DerivativeSet {
    let mut seen = simp(f);
    let mut work: Vec<FormalConjunction> = seen.iter().cloned().collect();
    while let Some(c) = work.pop() {
        for x in alphabet {
            for d in rho_conj(&c, x) {
                if !seen.contains(&d) {
                    seen.insert(d.clone());
                    work.push(d);
                }
            }
        }
    }
    seen
}

/// Iterated partial derivatives `∂⁺(f)`: the temporal subformulas that
/// derivation can reach.
pub fn iterated(f: &Formula) -> BaseSet {
    let mut out = BaseSet::new();
    collect_iterated(f, &mut out);
    out
}

fn collect_iterated(f: &Formula, out: &mut BaseSet) {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) | Formula::Not(_) => {
            out.insert(f.clone());
        }
        Formula::Or(a, b) | Formula::And(a, b) => {
            collect_iterated(a, out);
            collect_iterated(b, out);
        }
        Formula::Next(g) | Formula::Eventually(g) | Formula::Always(g) => {
            out.insert(f.clone());
            collect_iterated(g, out);
        }
        Formula::Until(a, b) | Formula::Release(a, b) => {
            out.insert(f.clone());
            collect_iterated(b, out);
            collect_iterated(a, out);
        }
    }
}

/// Membership in `SET(base)` without materializing it.
pub fn in_set_closure(c: &FormalConjunction, base: &BaseSet) -> bool {
    c.iter().all(|q| base.contains(q))
}

/// `2^|∂⁺(f)| + 1`, an upper bound on the number of descendants. Saturates
/// at `u64::MAX`.
pub fn descendant_bound(f: &Formula) -> u64 {
    match u32::try_from(iterated(f).len()) {
        Ok(n) if n < 64 => (1u64 << n).saturating_add(1),
        _ => u64::MAX,
    }
}
