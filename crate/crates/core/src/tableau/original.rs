//! The unoptimized tableau, with marked formulas and every intermediate
//! decomposition node.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::{self, Write as _};

use super::optimized::{EdgeRecord, NodeRecord, TableauDump};
use super::{decompose, is_contradictory, Rules};
use crate::automaton::escape;
use crate::syntax::{to_pnf, Formula};

/// A tableau node: unmarked formulas plus the formulas already decomposed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeSet {
    pub formulas: BTreeSet<Formula>,
    pub marks: BTreeSet<Formula>,
}

impl NodeSet {
    pub fn new(formulas: impl IntoIterator<Item = Formula>) -> Self {
        NodeSet {
            formulas: formulas.into_iter().collect(),
            marks: BTreeSet::new(),
        }
    }

    /// Only elementary formulas remain unmarked.
    pub fn is_state(&self) -> bool {
        self.formulas.iter().all(|f| decompose(f, Rules::Wolper).is_none())
    }

    pub fn holds(&self, f: &Formula) -> bool {
        self.formulas.contains(f) || self.marks.contains(f)
    }

    /// Every formula of the node, marked ones included.
    pub fn all(&self) -> BTreeSet<Formula> {
        self.formulas.union(&self.marks).cloned().collect()
    }
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut items: Vec<String> = self.marks.iter().map(|m| format!("[{m}]*")).collect();
        items.extend(self.formulas.iter().map(ToString::to_string));
        write!(f, "{{{}}}", items.join(", "))
    }
}

/// Edge kind: a decomposition rule number or the step rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum EdgeKind {
    Rule(u8),
    Step,
}

#[derive(Debug, Clone)]
pub struct OriginalTableau {
    pub nodes: Vec<NodeSet>,
    pub edges: Vec<(usize, usize, EdgeKind)>,
    pub prestate: Vec<bool>,
    pub eliminated: Vec<bool>,
    pub initial: usize,
}

/// Rules that do not branch go first; ties prefer the smallest formula.
fn rule_rank(rule: u8) -> u8 {
    match rule {
        2 => 0,
        4 => 1,
        6 => 2,
        1 => 3,
        3 => 4,
        _ => 5,
    }
}

fn expand(node: &NodeSet) -> Option<(u8, Vec<NodeSet>)> {
    let (target, rule, children) = node
        .formulas
        .iter()
        .filter_map(|f| decompose(f, Rules::Wolper).map(|(rule, kids)| (f, rule, kids)))
        .min_by_key(|(f, rule, _)| (rule_rank(*rule), (*f).clone()))?;
    let mut marks = node.marks.clone();
    marks.insert(target.clone());
    let kids = children
        .into_iter()
        .map(|extra| {
            let mut formulas = node.formulas.clone();
            formulas.remove(target);
            formulas.extend(extra.into_iter().filter(|f| !marks.contains(f)));
            NodeSet {
                formulas,
                marks: marks.clone(),
            }
        })
        .collect();
    Some((rule, kids))
}

fn step(node: &NodeSet) -> NodeSet {
    NodeSet::new(node.formulas.iter().filter_map(|f| match f {
        Formula::Next(g) => Some((**g).clone()),
        _ => None,
    }))
}

/// Builds the tableau of `f` (converted to PNF) and runs E1–E3.
pub fn build_original(f: &Formula) -> OriginalTableau {
    let mut t = OriginalTableau {
        nodes: Vec::new(),
        edges: Vec::new(),
        prestate: Vec::new(),
        eliminated: Vec::new(),
        initial: 0,
    };
    let mut index: BTreeMap<NodeSet, usize> = BTreeMap::new();
    let mut queue = VecDeque::new();
    let mut intern = |t: &mut OriginalTableau, node: NodeSet, pre: bool, queue: &mut VecDeque<usize>| {
        if let Some(&i) = index.get(&node) {
            t.prestate[i] |= pre;
            return i;
        }
        let i = t.nodes.len();
        let contradictory = is_contradictory(&node.formulas);
        index.insert(node.clone(), i);
        t.nodes.push(node);
        t.prestate.push(pre);
        t.eliminated.push(contradictory);
        if !contradictory {
            queue.push_back(i);
        }
        i
    };

    intern(&mut t, NodeSet::new([to_pnf(f).into_inner()]), true, &mut queue);
    while let Some(i) = queue.pop_front() {
        let node = t.nodes[i].clone();
        match expand(&node) {
            Some((rule, kids)) => {
                for kid in kids {
                    let j = intern(&mut t, kid, false, &mut queue);
                    t.edges.push((i, j, EdgeKind::Rule(rule)));
                }
            }
            None => {
                let j = intern(&mut t, step(&node), true, &mut queue);
                t.edges.push((i, j, EdgeKind::Step));
            }
        }
    }
    t.eliminate();
    t
}

impl OriginalTableau {
    fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter(move |e| e.0 == i).map(|e| e.1)
    }

    fn reaches(&self, from: usize, body: &Formula) -> bool {
        let mut seen = BTreeSet::from([from]);
        let mut queue = VecDeque::from([from]);
        while let Some(i) = queue.pop_front() {
            if self.nodes[i].holds(body) {
                return true;
            }
            for j in self.successors(i) {
                if !self.eliminated[j] && seen.insert(j) {
                    queue.push_back(j);
                }
            }
        }
        false
    }

    fn unfulfilled(&self, i: usize) -> bool {
        self.nodes[i].formulas.iter().any(|f| match f {
            Formula::Eventually(body) | Formula::Until(_, body) => !self.reaches(i, body),
            _ => false,
        })
    }

    fn eliminate(&mut self) {
        loop {
            let mut changed = false;
            for i in 0..self.nodes.len() {
                if self.eliminated[i] {
                    continue;
                }
                let succ: Vec<usize> = self.successors(i).collect();
                let e2 = !succ.is_empty() && succ.iter().all(|&j| self.eliminated[j]);
                if e2 || (self.prestate[i] && self.unfulfilled(i)) {
                    self.eliminated[i] = true;
                    changed = true;
                }
            }
            if !changed {
                return;
            }
        }
    }

    pub fn is_satisfiable(&self) -> bool {
        !self.eliminated[self.initial]
    }

    pub fn export_dot(&self) -> String {
        let mut out = String::from("digraph wolper {\n  node [fontname=\"monospace\", shape=box];\n");
        for (i, node) in self.nodes.iter().enumerate() {
            let shape = if self.prestate[i] { "ellipse" } else { "box" };
            let grey = if self.eliminated[i] {
                ", style=filled, fillcolor=lightgrey, fontcolor=grey40"
            } else {
                ""
            };
            let _ = writeln!(
                out,
                "  n{i} [label=\"S{i} = {}\", shape={shape}{grey}];",
                escape(&node.to_string())
            );
        }
        for (a, b, kind) in &self.edges {
            let label = match kind {
                EdgeKind::Rule(r) => r.to_string(),
                EdgeKind::Step => "step".to_string(),
            };
            let _ = writeln!(out, "  n{a} -> n{b} [label=\"{label}\"];");
        }
        out.push_str("}\n");
        out
    }

    /// Structured dump; nodes are tagged `prestate`, `state` or `node`.
    pub fn to_dump(&self) -> TableauDump {
        let nodes = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, node)| NodeRecord {
                id: format!("S{i}"),
                kind: if self.prestate[i] {
                    "prestate"
                } else if node.is_state() {
                    "state"
                } else {
                    "node"
                },
                label: node.to_string(),
                monomial: None,
                next: None,
                eliminated: self.eliminated[i],
            })
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|(a, b, kind)| EdgeRecord {
                from: format!("S{a}"),
                to: format!("S{b}"),
                label: match kind {
                    EdgeKind::Rule(r) => format!("D{r}"),
                    EdgeKind::Step => "step".into(),
                },
            })
            .collect();
        TableauDump {
            variant: "original",
            initial: format!("S{}", self.initial),
            satisfiable: self.is_satisfiable(),
            nodes,
            edges,
        }
    }

    /// Plain listing, one node per line.
    pub fn export_text(&self) -> String {
        let mut out = String::new();
        for (i, node) in self.nodes.iter().enumerate() {
            let mut tags = Vec::new();
            if self.prestate[i] {
                tags.push("pre-state");
            }
            if node.is_state() {
                tags.push("state");
            }
            if self.eliminated[i] {
                tags.push("eliminated");
            }
            let _ = writeln!(out, "S{i} = {node}  [{}]", tags.join(", "));
            for (_, b, kind) in self.edges.iter().filter(|e| e.0 == i) {
                let label = match kind {
                    EdgeKind::Rule(r) => format!("D{r}"),
                    EdgeKind::Step => "step".to_string(),
                };
                let _ = writeln!(out, "  --{label}--> S{b}");
            }
        }
        out
    }
}
