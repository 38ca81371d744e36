//! 1-weak alternating ω-automata built from partial derivatives.
//!
//! States are the iterated derivatives `∂⁺(φ)`, the transition of a state by
//! a symbol is its partial derivative, the initial alternatives are
//! `SIMP(φ)`, and the accepting states are `tt` together with every
//! Release- or Always-rooted state.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::derivatives::{iterated, pderiv_temporal, rho, DerivativeSet};
use crate::factors::{lf, lf_conj, simp, LinearFactorSet};
use crate::semantics::{LassoWord, Symbol};
use crate::syntax::{FormalConjunction, Formula};

/// Largest proposition count for which the transition table is tabulated.
pub const MAX_ATOMS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("{0} propositions exceed the supported maximum of {MAX_ATOMS}")]
    TooManyAtoms(usize),
    #[error("proposition '{0}' of the formula is missing from the alphabet")]
    MissingAtom(String),
    #[error("symbol {0} is outside the automaton's alphabet")]
    SymbolOutsideAlphabet(Symbol),
}

/// How the `tt` state behaves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TtHandling {
    /// `δ(tt, x) = {tt}` and `tt` is accepting.
    #[default]
    SelfLoop,
    /// `δ(tt, x) = {}` and `tt` is not accepting.
    Terminate,
}

#[derive(Debug, Clone)]
pub struct AlternatingAutomaton {
    states: Vec<Formula>,
    index: BTreeMap<Formula, usize>,
    atoms: Vec<String>,
    alphabet: Vec<Symbol>,
    guarded: Vec<LinearFactorSet>,
    delta: Vec<Vec<DerivativeSet>>,
    initial: DerivativeSet,
    accepting: Vec<bool>,
}

/// Acceptance of one state at every ring position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StateTrace {
    pub state: String,
    pub accepts: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunVerdict {
    pub accepted: bool,
    pub trace: Option<Vec<StateTrace>>,
}

/// Builds `A(f)` over the propositions of `f`.
pub fn build_aa(f: &Formula) -> Result<AlternatingAutomaton, AutomatonError> {
    let atoms: Vec<String> = f.atoms().into_iter().collect();
    AlternatingAutomaton::build(f, &atoms, TtHandling::SelfLoop)
}

fn is_accepting(q: &Formula, tt: TtHandling) -> bool {
    match q {
        Formula::True => tt == TtHandling::SelfLoop,
        Formula::Release(..) | Formula::Always(_) => true,
        _ => false,
    }
}

impl AlternatingAutomaton {
    /// Builds `A(f)` for a PNF formula over the alphabet `P(atoms)`, which
    /// must cover the propositions of `f`.
    pub fn build(f: &Formula, atoms: &[String], tt: TtHandling) -> Result<Self, AutomatonError> {
        let mut atoms: Vec<String> = atoms.to_vec();
        atoms.sort();
        atoms.dedup();
        if atoms.len() > MAX_ATOMS {
            return Err(AutomatonError::TooManyAtoms(atoms.len()));
        }
        if let Some(missing) = f.atoms().into_iter().find(|a| !atoms.contains(a)) {
            return Err(AutomatonError::MissingAtom(missing));
        }
        let alphabet = Symbol::alphabet(&atoms.iter().cloned().collect());
        let states: Vec<Formula> = iterated(f).into_iter().collect();
        let index = states
            .iter()
            .enumerate()
            .map(|(i, q)| (q.clone(), i))
            .collect();
        let terminated = |q: &Formula| tt == TtHandling::Terminate && *q == Formula::True;
        let guarded = states
            .iter()
            .map(|q| if terminated(q) { LinearFactorSet::new() } else { lf(q) })
            .collect();
        let delta = states
            .iter()
            .map(|q| {
                alphabet
                    .iter()
                    .map(|x| {
                        if terminated(q) {
                            DerivativeSet::new()
                        } else {
                            pderiv_temporal(q, x)
                        }
                    })
                    .collect()
            })
            .collect();
        let accepting = states.iter().map(|q| is_accepting(q, tt)).collect();
        let aa = AlternatingAutomaton {
            states,
            index,
            atoms,
            alphabet,
            guarded,
            delta,
            initial: simp(f),
            accepting,
        };
        if cfg!(debug_assertions) && tt == TtHandling::SelfLoop {
            assert!(aa.delta_matches_rho(), "transition function differs from ρ");
        }
        Ok(aa)
    }

    pub fn states(&self) -> &[Formula] {
        &self.states
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn alphabet(&self) -> &[Symbol] {
        &self.alphabet
    }

    pub fn initial(&self) -> &DerivativeSet {
        &self.initial
    }

    pub fn is_accepting_state(&self, q: &Formula) -> bool {
        self.index.get(q).is_some_and(|&i| self.accepting[i])
    }

    pub fn accepting(&self) -> impl Iterator<Item = &Formula> {
        self.states
            .iter()
            .zip(&self.accepting)
            .filter(|(_, acc)| **acc)
            .map(|(q, _)| q)
    }

    /// Transitions of `q` grouped by monomial guard.
    pub fn guarded(&self, q: &Formula) -> Option<&LinearFactorSet> {
        self.index.get(q).map(|&i| &self.guarded[i])
    }

    fn symbol_index(&self, x: &Symbol) -> Result<usize, AutomatonError> {
        let mut mask = 0;
        for p in x.props() {
            match self.atoms.binary_search(p) {
                Ok(i) => mask |= 1 << i,
                Err(_) => return Err(AutomatonError::SymbolOutsideAlphabet(x.clone())),
            }
        }
        Ok(mask)
    }

    /// `δ(q, x)`; `None` when `q` is not a state.
    pub fn delta(&self, q: &Formula, x: &Symbol) -> Result<Option<&DerivativeSet>, AutomatonError> {
        let sym = self.symbol_index(x)?;
        Ok(self.index.get(q).map(|&i| &self.delta[i][sym]))
    }

    /// `δ(q, x) = ρ(q, x)` for every state and symbol.
    pub fn delta_matches_rho(&self) -> bool {
        self.states.iter().enumerate().all(|(i, q)| {
            self.alphabet
                .iter()
                .enumerate()
                .all(|(s, x)| self.delta[i][s] == rho(q, x))
        })
    }

    /// Every conjunct reachable from `q` in one step is `q` itself or a
    /// strict subformula of `q`.
    pub fn is_one_weak(&self) -> bool {
        self.states.iter().enumerate().all(|(i, q)| {
            let below = q.subformulae();
            self.delta[i]
                .iter()
                .flatten()
                .flatten()
                .all(|r| r == q || below.contains(r))
        })
    }

    /// Every conjunction in `δ` and in the initial alternatives consists of
    /// states.
    pub fn is_closed(&self) -> bool {
        self.delta
            .iter()
            .flatten()
            .flatten()
            .chain(&self.initial)
            .all(|c| c.iter().all(|q| self.index.contains_key(q)))
    }

    /// Decides whether some run on `w` is accepting.
    ///
    /// Acceptance of state `q` at ring position `i` is the existence of an
    /// alternative in `δ(q, wᵢ)` whose members all accept at the successor
    /// position. States are solved in increasing size; since the automaton is
    /// 1-weak, the only recursive reference is to `q` itself, which is a
    /// greatest fixpoint for accepting `q` and a least one otherwise.
    pub fn accepts_lasso(&self, w: &LassoWord) -> Result<RunVerdict, AutomatonError> {
        self.run(w, false)
    }

    /// Like [`accepts_lasso`](Self::accepts_lasso), recording the
    /// per-state acceptance table.
    pub fn accepts_lasso_traced(&self, w: &LassoWord) -> Result<RunVerdict, AutomatonError> {
        self.run(w, true)
    }

    fn run(&self, w: &LassoWord, traced: bool) -> Result<RunVerdict, AutomatonError> {
        let n = w.ring_len();
        let symbols = (0..n)
            .map(|i| self.symbol_index(w.symbol_at(i)))
            .collect::<Result<Vec<_>, _>>()?;
        let mut order: Vec<usize> = (0..self.states.len()).collect();
        order.sort_by_key(|&i| self.states[i].size());

        let mut acc: Vec<Vec<bool>> = vec![Vec::new(); self.states.len()];
        for &q in &order {
            let mut val = vec![self.accepting[q]; n];
            loop {
                let mut changed = false;
                for i in (0..n).rev() {
                    let j = w.succ(i);
                    let v = self.delta[q][symbols[i]].iter().any(|c| {
                        c.iter().all(|r| {
                            let r = self.index[r];
                            if r == q {
                                val[j]
                            } else {
                                acc[r][j]
                            }
                        })
                    });
                    if v != val[i] {
                        val[i] = v;
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
            }
            acc[q] = val;
        }

        let accepted = self
            .initial
            .iter()
            .any(|c| c.iter().all(|q| acc[self.index[q]][0]));
        let trace = traced.then(|| {
            self.states
                .iter()
                .zip(acc)
                .map(|(q, accepts)| StateTrace {
                    state: q.to_string(),
                    accepts,
                })
                .collect()
        });
        Ok(RunVerdict { accepted, trace })
    }

    /// Deterministic DOT rendering with transitions grouped by guard.
    pub fn export_dot(&self) -> String {
        let mut out = String::from("digraph aa {\n  rankdir=LR;\n  node [fontname=\"monospace\"];\n");
        let initial_states: Vec<&Formula> = self.initial.iter().flatten().collect();
        for (i, q) in self.states.iter().enumerate() {
            let shape = if self.accepting[i] { "doublecircle" } else { "circle" };
            let style = if initial_states.contains(&q) { ", style=bold" } else { "" };
            let _ = writeln!(out, "  s{i} [label=\"{}\", shape={shape}{style}];", escape(&q.to_string()));
        }
        let mut sink = self.index.get(&Formula::True).map(|i| format!("s{i}"));
        let mut conj_nodes = 0;
        for (i, factors) in self.guarded.iter().enumerate() {
            for factor in factors {
                let guard = escape(&factor.monomial.to_string());
                match factor.next.elems() {
                    [] => {
                        let target = sink.get_or_insert_with(|| {
                            out.push_str("  top [label=\"tt\", shape=doublecircle];\n");
                            "top".to_string()
                        });
                        let _ = writeln!(out, "  s{i} -> {target} [label=\"{guard}\"];");
                    }
                    [r] => {
                        let _ = writeln!(out, "  s{i} -> s{} [label=\"{guard}\"];", self.index[r]);
                    }
                    members => {
                        let c = conj_nodes;
                        conj_nodes += 1;
                        let _ = writeln!(out, "  c{c} [label=\"\", shape=point];");
                        let _ = writeln!(out, "  s{i} -> c{c} [label=\"{guard}\"];");
                        for r in members {
                            let _ = writeln!(out, "  c{c} -> s{};", self.index[r]);
                        }
                    }
                }
            }
        }
        let initial: Vec<String> = self.initial.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(out, "  label=\"initial: {}\";", escape(&initial.join(" ; ")));
        out.push_str("}\n");
        out
    }

    pub fn to_dump(&self) -> AutomatonDump {
        AutomatonDump {
            atoms: self.atoms.clone(),
            states: self.states.iter().map(ToString::to_string).collect(),
            initial: self.initial.iter().map(FormalConjunction::printed).collect(),
            accepting: self.accepting().map(ToString::to_string).collect(),
            transitions: self
                .states
                .iter()
                .zip(&self.guarded)
                .flat_map(|(q, factors)| {
                    factors.iter().map(move |f| TransitionRecord {
                        state: q.to_string(),
                        guard: f.monomial.printed(),
                        next: f.next.printed(),
                    })
                })
                .collect(),
        }
    }

    /// Canonical structured dump; `next: []` denotes `⊤`.
    pub fn export_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_dump()).expect("automaton dump serializes")
    }
}

impl AlternatingAutomaton {
    /// Transition structure seen from the initial alternatives: a node is a
    /// set of conjunctions, and its edges `(μ, C')` are the linear factors
    /// of its members. The `tt` node is not expanded.
    pub fn canonical_structure(&self) -> CanonicalGraph {
        let top = DerivativeSet::from([FormalConjunction::top()]);
        let mut graph = CanonicalGraph::default();
        let mut seen = BTreeSet::from([self.initial.clone()]);
        let mut queue = VecDeque::from([self.initial.clone()]);
        while let Some(key) = queue.pop_front() {
            graph.nodes.insert(key_name(&key));
            if key == top {
                continue;
            }
            for factor in key.iter().flat_map(lf_conj) {
                let target = DerivativeSet::from([factor.next]);
                graph
                    .edges
                    .insert((key_name(&key), factor.monomial.to_string(), key_name(&target)));
                if seen.insert(target.clone()) {
                    queue.push_back(target);
                }
            }
        }
        graph
    }
}

/// Node and edge sets of a transition graph whose nodes are sets of
/// conjunctions, named by [`key_name`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CanonicalGraph {
    pub nodes: BTreeSet<String>,
    pub edges: BTreeSet<(String, String, String)>,
}

impl CanonicalGraph {
    /// One line per node and per edge, sorted.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for n in &self.nodes {
            let _ = writeln!(out, "node {n}");
        }
        for (a, m, b) in &self.edges {
            let _ = writeln!(out, "edge {a} --{m}--> {b}");
        }
        out
    }
}

/// Printed name of a set of alternatives: `c1 ; c2 ; ...`.
pub fn key_name(key: &DerivativeSet) -> String {
    key.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ; ")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransitionRecord {
    pub state: String,
    pub guard: Vec<String>,
    pub next: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AutomatonDump {
    pub atoms: Vec<String>,
    pub states: Vec<String>,
    pub initial: Vec<Vec<String>>,
    pub accepting: Vec<String>,
    pub transitions: Vec<TransitionRecord>,
}

pub(crate) fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn fc(items: &[&str]) -> FormalConjunction {
        FormalConjunction::from_formulas(items.iter().map(|s| p(s)))
    }

    fn lasso(s: &str) -> LassoWord {
        LassoWord::parse(s).unwrap()
    }

    #[test]
    fn gfp_automaton() {
        let aa = build_aa(&p("G F p")).unwrap();
        assert_eq!(aa.states(), &[p("p"), p("F p"), p("G F p")]);
        let d = aa.delta(&p("G F p"), &Symbol::new(["p"])).unwrap().unwrap();
        assert_eq!(*d, DerivativeSet::from([fc(&["G F p"]), fc(&["F p", "G F p"])]));
        assert_eq!(aa.accepting().cloned().collect::<Vec<_>>(), [p("G F p")]);
        assert!(aa.is_one_weak());
        assert!(aa.is_closed());
    }

    #[test]
    fn ff_and_tt_automata() {
        let aa = build_aa(&Formula::False).unwrap();
        assert_eq!(*aa.initial(), DerivativeSet::from([fc(&["ff"])]));
        assert!(aa.delta(&Formula::False, &Symbol::empty()).unwrap().unwrap().is_empty());

        let aa = build_aa(&Formula::True).unwrap();
        let d = aa.delta(&Formula::True, &Symbol::empty()).unwrap().unwrap();
        assert_eq!(*d, DerivativeSet::from([FormalConjunction::top()]));
        assert!(aa.is_accepting_state(&Formula::True));
    }

    #[test]
    fn acceptance_examples() {
        let aa = build_aa(&p("G F p")).unwrap();
        assert!(aa.accepts_lasso(&lasso("; {p}")).unwrap().accepted);
        assert!(!aa.accepts_lasso(&lasso("; {}")).unwrap().accepted);
        assert!(aa.accepts_lasso(&lasso("{} {} ; {} {p}")).unwrap().accepted);
        let ff = build_aa(&Formula::False).unwrap();
        assert!(!ff.accepts_lasso(&lasso("; {}")).unwrap().accepted);
        let until = build_aa(&p("p U q")).unwrap();
        assert!(until.accepts_lasso(&lasso("{p} {p} ; {q}")).unwrap().accepted);
        assert!(!until.accepts_lasso(&lasso("; {p}")).unwrap().accepted);
    }

    #[test]
    fn foreign_symbols_are_rejected() {
        let aa = build_aa(&p("G F p")).unwrap();
        assert_eq!(
            aa.accepts_lasso(&lasso("; {q}")),
            Err(AutomatonError::SymbolOutsideAlphabet(Symbol::new(["q"])))
        );
        let atoms = vec!["q".to_string()];
        assert!(matches!(
            AlternatingAutomaton::build(&p("p"), &atoms, TtHandling::SelfLoop),
            Err(AutomatonError::MissingAtom(_))
        ));
    }

    #[test]
    fn trace_agrees_with_verdict() {
        let aa = build_aa(&p("G F p")).unwrap();
        let verdict = aa.accepts_lasso_traced(&lasso("{} ; {p}")).unwrap();
        let trace = verdict.trace.unwrap();
        let gfp = trace.iter().find(|t| t.state == "G F p").unwrap();
        assert_eq!(gfp.accepts, [true, true]);
        assert!(verdict.accepted);
    }

    #[test]
    fn dot_export_shapes() {
        let dot = build_aa(&p("p")).unwrap().export_dot();
        assert!(dot.contains("s0 [label=\"p\", shape=circle, style=bold];"));
        assert!(dot.contains("top [label=\"tt\", shape=doublecircle];"));
        assert!(dot.contains("s0 -> top [label=\"p\"];"));

        let dot = build_aa(&p("G F p")).unwrap().export_dot();
        assert_eq!(dot.matches("s2 -> ").count(), 2);
        assert!(dot.contains("shape=doublecircle"));

        let dot = build_aa(&Formula::False).unwrap().export_dot();
        assert_eq!(dot.matches("->").count(), 0);
        assert_eq!(dot.matches("shape=circle").count(), 1);
    }

    #[test]
    fn json_export_shapes() {
        let dump = build_aa(&Formula::True).unwrap().to_dump();
        assert_eq!(dump.states, ["tt"]);
        assert_eq!(
            dump.transitions,
            [TransitionRecord { state: "tt".into(), guard: vec![], next: vec![] }]
        );

        let dump = build_aa(&p("p")).unwrap().to_dump();
        assert_eq!(
            dump.transitions,
            [TransitionRecord { state: "p".into(), guard: vec!["p".into()], next: vec![] }]
        );

        let dump = build_aa(&p("G F p")).unwrap().to_dump();
        assert_eq!(dump.states.len(), 3);
        // GFp: 2 guards, Fp: 2 guards, p: 1 guard
        assert_eq!(dump.transitions.len(), 5);
    }
}
