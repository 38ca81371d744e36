//! Wolper-style semantic tableaux.
//!
//! [`rewrite_exhaust`] applies the decomposition rules D1–D6 to sets of
//! formula sets until only state nodes (literals and `X`-formulas) remain,
//! dropping contradictory nodes along the way. The optimized construction
//! in [`optimized`] is built from these rewrites; [`original`] keeps
//! Wolper's marked formulas and intermediate nodes.
//!
//! The rewriting used by the optimized construction also distributes `X`
//! over `&` and `|`, so every next-obligation of a state node is a temporal
//! formula and every state maps to exactly one linear factor.

pub mod optimized;
pub mod original;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::factors::{LinearFactor, Literal, Monomial};
use crate::syntax::{FormalConjunction, Formula};

pub use optimized::{
    build_optimized, eliminate, extract_witness, is_satisfiable, PreState, TableauError,
    TableauGraph, Verdict,
};
pub use original::{build_original, OriginalTableau};

/// A node whose formulas are all elementary.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateNode {
    pub literals: BTreeSet<Literal>,
    /// Bodies of the node's `X`-formulas, `tt` omitted.
    pub nexts: BTreeSet<Formula>,
}

impl StateNode {
    pub fn next_conjunction(&self) -> FormalConjunction {
        FormalConjunction::from_formulas(self.nexts.iter().cloned())
    }
}

impl fmt::Display for StateNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        node_to_factor(self).fmt(f)
    }
}

/// `⟦S⟧`: the linear factor of a state node.
pub fn node_to_factor(s: &StateNode) -> LinearFactor {
    let monomial = Monomial::from_literals(s.literals.iter().cloned());
    debug_assert!(!monomial.is_bottom(), "state node holds a contradiction");
    LinearFactor::new(monomial, s.next_conjunction())
}

/// Rule selection during exhaustive rewriting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Smallest node first; smallest formula within it.
    #[default]
    FirstSmallest,
    /// Largest node first; largest formula within it.
    LastLargest,
}

/// Which rule set the rewriting uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Rules {
    /// D1–D6 only, `X φ` is always elementary.
    Wolper,
    /// D1–D6 plus `X (φ & ψ) → {{Xφ, Xψ}}` and `X (φ | ψ) → {{Xφ}, {Xψ}}`.
    DistributeNext,
}

/// Decomposition of a non-elementary formula, with its rule number
/// (7 and 8 for the two `X` distribution rules).
pub(crate) fn decompose(f: &Formula, rules: Rules) -> Option<(u8, Vec<Vec<Formula>>)> {
    let next = Formula::next;
    match f {
        Formula::Or(a, b) => Some((1, vec![vec![(**a).clone()], vec![(**b).clone()]])),
        Formula::And(a, b) => Some((2, vec![vec![(**a).clone(), (**b).clone()]])),
        Formula::Eventually(g) => Some((3, vec![vec![(**g).clone()], vec![next(f.clone())]])),
        Formula::Always(g) => Some((4, vec![vec![(**g).clone(), next(f.clone())]])),
        Formula::Until(a, b) => Some((
            5,
            vec![vec![(**b).clone()], vec![(**a).clone(), next(f.clone())]],
        )),
        Formula::Release(a, b) => Some((
            6,
            vec![vec![(**b).clone(), Formula::or((**a).clone(), next(f.clone()))]],
        )),
        Formula::Next(g) if rules == Rules::DistributeNext => match &**g {
            Formula::And(a, b) => Some((7, vec![vec![next((**a).clone()), next((**b).clone())]])),
            Formula::Or(a, b) => Some((8, vec![vec![next((**a).clone())], vec![next((**b).clone())]])),
            _ => None,
        },
        _ => None,
    }
}

/// E1 generalized: `ff`, or a literal together with its complement.
pub(crate) fn is_contradictory<'a>(formulas: impl IntoIterator<Item = &'a Formula> + Clone) -> bool {
    let lits: BTreeSet<Literal> = formulas.clone().into_iter().filter_map(Literal::from_formula).collect();
    formulas.into_iter().any(|f| *f == Formula::False)
        || lits.iter().any(|l| lits.contains(&l.complement()))
}

/// Result of rewriting: every state node together with the formulas that
/// occurred anywhere in the derivations producing it.
pub type Decomposition = BTreeMap<StateNode, BTreeSet<Formula>>;

/// Exhaustive rewriting of `start` under `strategy`, keeping derivation
/// closures.
///
/// Nodes are multisets while they are rewritten: a formula added by a rule
/// that is already present is kept as a second copy and decomposed on its
/// own, exactly as the factor product treats repeated conjuncts. Copies
/// collapse once the node is elementary.
pub fn decompose_exhaust(start: &[BTreeSet<Formula>], strategy: Strategy) -> Decomposition {
    // node (sorted multiset) -> formulas seen in its lineage
    let mut nodes: BTreeMap<Vec<Formula>, BTreeSet<Formula>> = BTreeMap::new();
    for s in start {
        if !is_contradictory(s) {
            nodes.entry(s.iter().cloned().collect()).or_default().extend(s.iter().cloned());
        }
    }
    let rules = Rules::DistributeNext;
    loop {
        let reducible = |node: &Vec<Formula>| node.iter().any(|f| decompose(f, rules).is_some());
        let picked = match strategy {
            Strategy::FirstSmallest => nodes.keys().find(|n| reducible(n)),
            Strategy::LastLargest => nodes.keys().rev().find(|n| reducible(n)),
        }
        .cloned();
        let Some(node) = picked else { break };
        let seen = nodes.remove(&node).unwrap_or_default();
        let mut candidates = node
            .iter()
            .enumerate()
            .filter_map(|(i, f)| decompose(f, rules).map(|d| (i, d)));
        let (target, (_, children)) = match strategy {
            Strategy::FirstSmallest => candidates.next(),
            Strategy::LastLargest => candidates.next_back(),
        }
        .expect("picked node is reducible");
        for child in children {
            let mut formulas = node.clone();
            formulas.remove(target);
            formulas.extend(child);
            formulas.sort();
            if is_contradictory(&formulas) {
                continue;
            }
            let entry = nodes.entry(formulas.clone()).or_default();
            entry.extend(seen.iter().cloned());
            entry.extend(formulas);
        }
    }

    let mut out = Decomposition::new();
    for (node, seen) in nodes {
        let state = StateNode {
            literals: node.iter().filter_map(Literal::from_formula).collect(),
            nexts: node
                .iter()
                .filter_map(|f| match f {
                    Formula::Next(g) if **g != Formula::True => Some((**g).clone()),
                    _ => None,
                })
                .collect(),
        };
        out.entry(state).or_default().extend(seen);
    }
    out
}

/// `N ↣* N'`: the state nodes reached by exhaustive decomposition.
pub fn rewrite_exhaust(start: &[BTreeSet<Formula>], strategy: Strategy) -> BTreeSet<StateNode> {
    decompose_exhaust(start, strategy).into_keys().collect()
}

/// `⟦N⟧` for `{{f}} ↣* N`.
pub fn factors_of_rewrite(f: &Formula, strategy: Strategy) -> BTreeSet<LinearFactor> {
    rewrite_exhaust(&[BTreeSet::from([f.clone()])], strategy)
        .iter()
        .map(node_to_factor)
        .collect()
}
