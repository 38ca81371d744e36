//! The optimized tableau: pre-states are single formulas, their children
//! are the state nodes of exhaustive decomposition, and each state points
//! to the conjunction of its next-obligations.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use serde::Serialize;
use thiserror::Error;

use super::{decompose_exhaust, node_to_factor, StateNode, Strategy};
use crate::automaton::{escape, key_name, CanonicalGraph};
use crate::derivatives::DerivativeSet;
use crate::factors::{minimal_symbol, simp, LinearFactor};
use crate::semantics::{eval_lasso, LassoWord, Symbol};
use crate::syntax::{to_pnf, FormalConjunction, Formula};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableauError {
    #[error("initial pre-state is eliminated; there is no witness")]
    NoWitness,
    #[error("witness {witness} does not satisfy {formula}")]
    WitnessRejected { formula: String, witness: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreState {
    pub formula: Formula,
    /// `SIMP` of the initial formula, or the singleton of the conjunction a
    /// state points to. Pre-states with equal keys are one node.
    pub key: DerivativeSet,
}

impl PreState {
    fn new(formula: Formula) -> Self {
        let key = simp(&formula);
        PreState { formula, key }
    }

    /// The pre-state `tt`, which is never expanded.
    pub fn is_tt(&self) -> bool {
        self.key.len() == 1 && self.key.iter().all(FormalConjunction::is_top)
    }

    /// Bodies of the `F ψ` / `φ U ψ` conjuncts of the pre-state.
    pub fn eventualities(&self) -> Vec<&Formula> {
        self.formula
            .conjuncts()
            .into_iter()
            .filter_map(|f| match f {
                Formula::Eventually(body) | Formula::Until(_, body) => Some(&**body),
                _ => None,
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct TableauGraph {
    pub prestates: Vec<PreState>,
    pub states: Vec<StateNode>,
    /// Formulas occurring in the derivations of each state.
    pub closures: Vec<BTreeSet<Formula>>,
    pub lf_edges: Vec<Vec<usize>>,
    /// `None` when the state has no next-obligations (its child is `tt`).
    pub pd_edges: Vec<Option<usize>>,
    pub initial: usize,
    pub eliminated_prestates: Vec<bool>,
    pub eliminated_states: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub satisfiable: bool,
    pub witness: Option<LassoWord>,
}

/// Builds the optimized tableau of `f` (converted to PNF first).
pub fn build_optimized(f: &Formula) -> TableauGraph {
    build_with(f, Strategy::default())
}

pub(crate) fn build_with(f: &Formula, strategy: Strategy) -> TableauGraph {
    let f = to_pnf(f).into_inner();
    let mut g = TableauGraph {
        prestates: Vec::new(),
        states: Vec::new(),
        closures: Vec::new(),
        lf_edges: Vec::new(),
        pd_edges: Vec::new(),
        initial: 0,
        eliminated_prestates: Vec::new(),
        eliminated_states: Vec::new(),
    };
    let mut pre_index: BTreeMap<DerivativeSet, usize> = BTreeMap::new();
    let mut state_index: BTreeMap<StateNode, usize> = BTreeMap::new();
    let mut queue = VecDeque::new();

    let initial = PreState::new(f);
    pre_index.insert(initial.key.clone(), 0);
    g.prestates.push(initial);
    g.lf_edges.push(Vec::new());
    queue.push_back(0);

    while let Some(pre) = queue.pop_front() {
        if g.prestates[pre].is_tt() {
            continue;
        }
        let start = [BTreeSet::from([g.prestates[pre].formula.clone()])];
        for (state, closure) in decompose_exhaust(&start, strategy) {
            let s = match state_index.get(&state) {
                Some(&s) => {
                    g.closures[s].extend(closure);
                    s
                }
                None => {
                    let s = g.states.len();
                    let next = state.next_conjunction();
                    state_index.insert(state.clone(), s);
                    g.states.push(state);
                    g.closures.push(closure);
                    let child = if next.is_top() {
                        None
                    } else {
                        let key = DerivativeSet::from([next.clone()]);
                        Some(*pre_index.entry(key.clone()).or_insert_with(|| {
                            g.prestates.push(PreState {
                                formula: next.to_formula(),
                                key,
                            });
                            g.lf_edges.push(Vec::new());
                            queue.push_back(g.prestates.len() - 1);
                            g.prestates.len() - 1
                        }))
                    };
                    g.pd_edges.push(child);
                    s
                }
            };
            g.lf_edges[pre].push(s);
        }
    }
    g.eliminated_prestates = vec![false; g.prestates.len()];
    g.eliminated_states = vec![false; g.states.len()];
    g
}

/// Node of the combined graph: pre-states first, then states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Node {
    Pre(usize),
    State(usize),
}

impl TableauGraph {
    fn live(&self, n: Node) -> bool {
        match n {
            Node::Pre(i) => !self.eliminated_prestates[i],
            Node::State(i) => !self.eliminated_states[i],
        }
    }

    fn successors(&self, n: Node) -> Vec<Node> {
        match n {
            Node::Pre(i) => self.lf_edges[i].iter().map(|&s| Node::State(s)).collect(),
            Node::State(i) => self.pd_edges[i].map(Node::Pre).into_iter().collect(),
        }
    }

    fn live_successors(&self, n: Node) -> Vec<Node> {
        self.successors(n).into_iter().filter(|&m| self.live(m)).collect()
    }

    /// Breadth-first search over live nodes; returns the parent map.
    fn bfs(&self, from: Node, within: Option<&BTreeSet<Node>>) -> BTreeMap<Node, Option<Node>> {
        let mut parent = BTreeMap::from([(from, None)]);
        let mut queue = VecDeque::from([from]);
        while let Some(n) = queue.pop_front() {
            for m in self.live_successors(n) {
                if within.is_some_and(|set| !set.contains(&m)) || parent.contains_key(&m) {
                    continue;
                }
                parent.insert(m, Some(n));
                queue.push_back(m);
            }
        }
        parent
    }

    fn path_to(parent: &BTreeMap<Node, Option<Node>>, target: Node) -> Vec<Node> {
        let mut path = vec![target];
        let mut cur = target;
        while let Some(Some(prev)) = parent.get(&cur) {
            path.push(*prev);
            cur = *prev;
        }
        path.reverse();
        path
    }

    /// Is some live state reachable from pre-state `pre` whose derivation
    /// contains `body`?
    fn fulfils(&self, pre: usize, body: &Formula) -> bool {
        self.bfs(Node::Pre(pre), None).keys().any(|n| match n {
            Node::State(s) => self.closures[*s].contains(body),
            Node::Pre(_) => false,
        })
    }

    pub fn is_initial_live(&self) -> bool {
        !self.eliminated_prestates[self.initial]
    }

    pub fn factor(&self, s: usize) -> LinearFactor {
        node_to_factor(&self.states[s])
    }

    /// DOT rendering: pre-states as ellipses, states as boxes, `LF` and `PD`
    /// edges, eliminated nodes grey.
    pub fn export_dot(&self) -> String {
        let grey = ", style=filled, fillcolor=lightgrey, fontcolor=grey40";
        let mut out = String::from("digraph tableau {\n  node [fontname=\"monospace\"];\n");
        for (i, pre) in self.prestates.iter().enumerate() {
            let style = if self.eliminated_prestates[i] { grey } else { "" };
            let peripheries = if i == self.initial { ", peripheries=2" } else { "" };
            let _ = writeln!(
                out,
                "  p{i} [label=\"{}\", shape=ellipse{peripheries}{style}];",
                escape(&pre.formula.to_string())
            );
        }
        for (i, _) in self.states.iter().enumerate() {
            let style = if self.eliminated_states[i] { grey } else { "" };
            let _ = writeln!(out, "  s{i} [label=\"{}\", shape=box{style}];", escape(&self.factor(i).to_string()));
        }
        for (i, children) in self.lf_edges.iter().enumerate() {
            for s in children {
                let _ = writeln!(out, "  p{i} -> s{s} [label=\"LF\"];");
            }
        }
        for (i, child) in self.pd_edges.iter().enumerate() {
            if let Some(p) = child {
                let _ = writeln!(out, "  s{i} -> p{p} [label=\"PD\"];");
            }
        }
        out.push_str("}\n");
        out
    }

    /// Plain listing: each pre-state followed by its states.
    pub fn export_text(&self) -> String {
        let mut out = String::new();
        for (i, pre) in self.prestates.iter().enumerate() {
            let dead = if self.eliminated_prestates[i] { "  [eliminated]" } else { "" };
            let _ = writeln!(out, "p{i}: {}{dead}", pre.formula);
            for &s in &self.lf_edges[i] {
                let target = self.pd_edges[s].map_or("tt".to_string(), |p| format!("p{p}"));
                let dead = if self.eliminated_states[s] { "  [eliminated]" } else { "" };
                let _ = writeln!(out, "  LF s{s}: {} PD {target}{dead}", self.factor(s));
            }
        }
        let verdict = if self.is_initial_live() { "live" } else { "eliminated" };
        let _ = writeln!(out, "initial p{} {verdict}", self.initial);
        out
    }

    pub fn to_dump(&self) -> TableauDump {
        let mut nodes = Vec::new();
        for (i, pre) in self.prestates.iter().enumerate() {
            nodes.push(NodeRecord {
                id: format!("p{i}"),
                kind: "prestate",
                label: pre.formula.to_string(),
                monomial: None,
                next: None,
                eliminated: self.eliminated_prestates[i],
            });
        }
        for i in 0..self.states.len() {
            let factor = self.factor(i);
            nodes.push(NodeRecord {
                id: format!("s{i}"),
                kind: "state",
                label: factor.to_string(),
                monomial: Some(factor.monomial.printed()),
                next: Some(factor.next.printed()),
                eliminated: self.eliminated_states[i],
            });
        }
        let mut edges = Vec::new();
        for (i, children) in self.lf_edges.iter().enumerate() {
            edges.extend(children.iter().map(|s| EdgeRecord {
                from: format!("p{i}"),
                to: format!("s{s}"),
                label: "LF".into(),
            }));
        }
        for (i, child) in self.pd_edges.iter().enumerate() {
            edges.extend(child.iter().map(|p| EdgeRecord {
                from: format!("s{i}"),
                to: format!("p{p}"),
                label: "PD".into(),
            }));
        }
        TableauDump {
            variant: "optimized",
            initial: format!("p{}", self.initial),
            satisfiable: self.is_initial_live(),
            nodes,
            edges,
        }
    }

    /// Pre-states named by their `SIMP` key and edges
    /// `(pre-state, guard, successor)`, where a state without
    /// next-obligations leads to `tt`.
    pub fn canonical_structure(&self) -> CanonicalGraph {
        let top = key_name(&DerivativeSet::from([FormalConjunction::top()]));
        let mut graph = CanonicalGraph::default();
        for (i, children) in self.lf_edges.iter().enumerate() {
            graph.nodes.insert(key_name(&self.prestates[i].key));
            for &s in children {
                let target = match self.pd_edges[s] {
                    Some(p) => key_name(&self.prestates[p].key),
                    None => top.clone(),
                };
                graph.nodes.insert(target.clone());
                graph.edges.insert((
                    key_name(&self.prestates[i].key),
                    self.factor(s).monomial.to_string(),
                    target,
                ));
            }
        }
        graph
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NodeRecord {
    pub id: String,
    pub kind: &'static str,
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monomial: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub next: Option<Vec<String>>,
    pub eliminated: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EdgeRecord {
    pub from: String,
    pub to: String,
    pub label: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableauDump {
    pub variant: &'static str,
    pub initial: String,
    pub satisfiable: bool,
    pub nodes: Vec<NodeRecord>,
    pub edges: Vec<EdgeRecord>,
}

/// Runs E2 and E3 jointly to a fixpoint.
///
/// E2 removes pre-states whose states are all eliminated (the `tt`
/// pre-state is exempt) and states whose successor pre-state is eliminated.
/// E3 removes a pre-state holding an eventuality `F ψ` or `φ U ψ` when no
/// live state reachable from it was derived through `ψ`.
pub fn eliminate(mut g: TableauGraph) -> TableauGraph {
    loop {
        let mut changed = false;
        for i in 0..g.prestates.len() {
            if g.eliminated_prestates[i] || g.prestates[i].is_tt() {
                continue;
            }
            let dead = g.live_successors(Node::Pre(i)).is_empty();
            if dead || g.prestates[i].eventualities().iter().any(|body| !g.fulfils(i, body)) {
                g.eliminated_prestates[i] = true;
                changed = true;
            }
        }
        for s in 0..g.states.len() {
            if g.eliminated_states[s] {
                continue;
            }
            if g.pd_edges[s].is_some_and(|p| g.eliminated_prestates[p]) {
                g.eliminated_states[s] = true;
                changed = true;
            }
        }
        if !changed {
            return g;
        }
    }
}

/// Extracts a lasso model from an eliminated tableau whose initial
/// pre-state is live.
///
/// The lasso follows a shortest live path into a bottom strongly connected
/// component of the live graph and then loops through every node of that
/// component, so every eventuality of a pre-state on the loop is fulfilled
/// on the loop. Each state contributes the least symbol satisfying its
/// monomial. A terminal node (a state without obligations or the `tt`
/// pre-state) is followed by `{}` forever.
pub fn extract_witness(g: &TableauGraph) -> Result<LassoWord, TableauError> {
    if !g.is_initial_live() {
        return Err(TableauError::NoWitness);
    }
    let start = Node::Pre(g.initial);
    let parent = g.bfs(start, None);
    let reachable: Vec<Node> = parent.keys().copied().collect();

    let mut graph = DiGraph::<Node, ()>::new();
    let ids: BTreeMap<Node, NodeIndex> = reachable.iter().map(|&n| (n, graph.add_node(n))).collect();
    for &n in &reachable {
        for m in g.live_successors(n) {
            graph.add_edge(ids[&n], ids[&m], ());
        }
    }
    let depth = |n: &Node| Graph::path_to(&parent, *n).len();
    let bottom = tarjan_scc(&graph)
        .into_iter()
        .map(|scc| scc.into_iter().map(|ix| graph[ix]).collect::<BTreeSet<Node>>())
        .filter(|scc| {
            scc.iter()
                .all(|&n| g.live_successors(n).iter().all(|m| scc.contains(m)))
        })
        .min_by_key(|scc| scc.iter().map(|n| (depth(n), *n)).min())
        .ok_or(TableauError::NoWitness)?;

    let entry = *bottom.iter().min_by_key(|n| (depth(n), **n)).expect("components are non-empty");
    let lead = Graph::path_to(&parent, entry);
    let symbol = |n: &Node| match n {
        Node::State(s) => minimal_symbol(&g.factor(*s).monomial),
        Node::Pre(_) => None,
    };

    let terminal = g.live_successors(entry).is_empty();
    let (prefix, cycle) = if terminal {
        (lead.iter().filter_map(symbol).collect(), vec![Symbol::empty()])
    } else {
        let mut walk = vec![entry];
        for &target in bottom.iter().filter(|&&n| n != entry) {
            let here = *walk.last().expect("walk starts at the entry");
            let hop = g.bfs(here, Some(&bottom));
            walk.extend(Graph::path_to(&hop, target).into_iter().skip(1));
        }
        let here = *walk.last().expect("walk starts at the entry");
        let first = *g
            .live_successors(here)
            .iter()
            .find(|m| bottom.contains(m))
            .expect("bottom component is closed and non-terminal");
        let back = g.bfs(first, Some(&bottom));
        walk.push(first);
        walk.extend(Graph::path_to(&back, entry).into_iter().skip(1));
        walk.pop();
        let prefix = lead[..lead.len() - 1].iter().filter_map(symbol).collect();
        (prefix, walk.iter().filter_map(symbol).collect())
    };
    Ok(LassoWord::new(prefix, cycle).expect("loop of a bottom component holds a state"))
}

type Graph = TableauGraph;

/// Satisfiability via the optimized tableau, with a witness checked
/// against the lasso semantics.
pub fn is_satisfiable(f: &Formula) -> Result<Verdict, TableauError> {
    let g = eliminate(build_optimized(f));
    if !g.is_initial_live() {
        return Ok(Verdict {
            satisfiable: false,
            witness: None,
        });
    }
    let witness = extract_witness(&g)?;
    if !eval_lasso(f, &witness) {
        return Err(TableauError::WitnessRejected {
            formula: f.to_string(),
            witness: witness.to_string(),
        });
    }
    Ok(Verdict {
        satisfiable: true,
        witness: Some(witness),
    })
}
