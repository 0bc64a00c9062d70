//! Rooted trees, out-trees and edge-trees, with the bijections between them
//! and the precedence and run machinery built on out-trees.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::axioms::{check_axiom, AxiomId, Violation};
use crate::relation::{join, QuintupleSet};
use crate::value::Atom;

pub type Edge = (Atom, Atom);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("not a rooted tree: {0}")]
    InvalidRootedTree(String),
    #[error("not an out-tree: {0}")]
    InvalidOutTree(String),
    #[error(transparent)]
    EdgeTree(#[from] EdgeTreeViolation),
    #[error("no out-tree: {0}")]
    Axiom(Box<Violation>),
    #[error("unknown node {0}")]
    UnknownNode(Atom),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeTreeRule {
    /// The reversed relation is a function.
    E1,
    /// Every successor leaves the successor set under iterated predecessors.
    E2,
    /// Exactly one source is not a successor.
    E3,
}

impl fmt::Display for EdgeTreeRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self:?}]")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{rule} fails: {message}")]
pub struct EdgeTreeViolation {
    pub rule: EdgeTreeRule,
    pub nodes: BTreeSet<Atom>,
    pub message: String,
}

/// An undirected tree with a distinguished root. Edges are stored with their
/// endpoints in ascending order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootedTree {
    nodes: BTreeSet<Atom>,
    edges: BTreeSet<Edge>,
    root: Atom,
}

impl RootedTree {
    pub fn new(
        nodes: BTreeSet<Atom>,
        edges: impl IntoIterator<Item = Edge>,
        root: Atom,
    ) -> Result<Self, TreeError> {
        let bad = |m: String| TreeError::InvalidRootedTree(m);
        if !nodes.contains(&root) {
            return Err(bad(format!("root {root} is not a node")));
        }
        let mut norm = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(bad(format!("loop at {a}")));
            }
            for x in [&a, &b] {
                if !nodes.contains(x) {
                    return Err(bad(format!("edge endpoint {x} is not a node")));
                }
            }
            norm.insert(if a < b { (a, b) } else { (b, a) });
        }
        if norm.len() + 1 != nodes.len() {
            return Err(bad(format!(
                "{} nodes need {} edges, found {}",
                nodes.len(),
                nodes.len() - 1,
                norm.len()
            )));
        }
        // n - 1 edges and connected ⇒ acyclic.
        let adj = adjacency(&norm);
        let seen = bfs_order(&adj, &root);
        if seen.len() != nodes.len() {
            let missing = nodes.iter().find(|x| !seen.contains_key(*x)).unwrap();
            return Err(bad(format!("node {missing} is not connected to the root")));
        }
        Ok(RootedTree {
            nodes,
            edges: norm,
            root,
        })
    }

    pub fn nodes(&self) -> &BTreeSet<Atom> {
        &self.nodes
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn root(&self) -> &Atom {
        &self.root
    }
}

fn adjacency(edges: &BTreeSet<Edge>) -> BTreeMap<&Atom, Vec<&Atom>> {
    let mut adj: BTreeMap<&Atom, Vec<&Atom>> = BTreeMap::new();
    for (a, b) in edges {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    adj
}

/// Breadth-first parent map from `root`; the root maps to itself.
fn bfs_order<'a>(adj: &BTreeMap<&'a Atom, Vec<&'a Atom>>, root: &'a Atom) -> BTreeMap<&'a Atom, &'a Atom> {
    let mut parent = BTreeMap::from([(root, root)]);
    let mut queue = VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        for &n in adj.get(x).into_iter().flatten() {
            if !parent.contains_key(n) {
                parent.insert(n, x);
                queue.push_back(n);
            }
        }
    }
    parent
}

/// A set of directed edges satisfying [E1]–[E3].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeTree {
    edges: BTreeSet<Edge>,
    parent: BTreeMap<Atom, Atom>,
    root: Atom,
}

impl EdgeTree {
    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn root(&self) -> &Atom {
        &self.root
    }

    /// (π₁E ∪ π₂E, E).
    pub fn into_out_tree(self) -> OutTree {
        let nodes = self
            .edges
            .iter()
            .flat_map(|(w, y)| [w.clone(), y.clone()])
            .collect();
        OutTree {
            nodes,
            edges: self.edges,
            root: self.root,
            parent: self.parent,
        }
    }
}

pub fn validate_edge_tree(edges: &BTreeSet<Edge>) -> Result<EdgeTree, EdgeTreeViolation> {
    let mut parent: BTreeMap<Atom, Atom> = BTreeMap::new();
    for (w, y) in edges {
        if let Some(prev) = parent.insert(y.clone(), w.clone()) {
            if &prev != w {
                return Err(EdgeTreeViolation {
                    rule: EdgeTreeRule::E1,
                    nodes: BTreeSet::from([y.clone()]),
                    message: format!("{y} has predecessors {prev} and {w}"),
                });
            }
        }
    }
    let bound = parent.len();
    for y in parent.keys() {
        let mut x = y;
        let mut escaped = false;
        for _ in 0..bound {
            x = &parent[x];
            if !parent.contains_key(x) {
                escaped = true;
                break;
            }
        }
        if !escaped {
            return Err(EdgeTreeViolation {
                rule: EdgeTreeRule::E2,
                nodes: BTreeSet::from([y.clone()]),
                message: format!("the predecessor chain from {y} never leaves the successor set"),
            });
        }
    }
    let sources: BTreeSet<Atom> = edges
        .iter()
        .map(|(w, _)| w)
        .filter(|w| !parent.contains_key(*w))
        .cloned()
        .collect();
    if sources.len() != 1 {
        return Err(EdgeTreeViolation {
            rule: EdgeTreeRule::E3,
            message: format!("non-successor sources {{{}}} are not a singleton", join(&sources)),
            nodes: sources,
        });
    }
    Ok(EdgeTree {
        edges: edges.clone(),
        parent,
        root: sources.into_iter().next().unwrap(),
    })
}

/// A rooted tree with every edge pointing away from the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutTree {
    nodes: BTreeSet<Atom>,
    edges: BTreeSet<Edge>,
    root: Atom,
    parent: BTreeMap<Atom, Atom>,
}

/// How `x1` relates to `x2` under precedence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Precedence {
    Equal,
    /// `x1` strictly precedes `x2`.
    Before,
    /// `x2` strictly precedes `x1`.
    After,
    Incomparable,
}

impl Precedence {
    pub fn is_weak(self) -> bool {
        matches!(self, Precedence::Equal | Precedence::Before)
    }

    pub fn is_strict(self) -> bool {
        self == Precedence::Before
    }
}

impl OutTree {
    pub fn new(nodes: BTreeSet<Atom>, edges: BTreeSet<Edge>) -> Result<Self, TreeError> {
        if edges.is_empty() {
            if nodes.len() != 1 {
                return Err(TreeError::InvalidOutTree(format!(
                    "an edgeless out-tree has exactly one node, found {}",
                    nodes.len()
                )));
            }
            let root = nodes.first().unwrap().clone();
            return Ok(OutTree {
                nodes,
                edges,
                root,
                parent: BTreeMap::new(),
            });
        }
        let tree = validate_edge_tree(&edges)?.into_out_tree();
        if tree.nodes != nodes {
            return Err(TreeError::InvalidOutTree(format!(
                "node set {{{}}} differs from the edge endpoints {{{}}}",
                join(&nodes),
                join(&tree.nodes)
            )));
        }
        Ok(tree)
    }

    pub fn trivial(node: Atom) -> Self {
        OutTree {
            nodes: BTreeSet::from([node.clone()]),
            edges: BTreeSet::new(),
            root: node,
            parent: BTreeMap::new(),
        }
    }

    pub fn nodes(&self) -> &BTreeSet<Atom> {
        &self.nodes
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn root(&self) -> &Atom {
        &self.root
    }

    pub fn is_trivial(&self) -> bool {
        self.edges.is_empty()
    }

    /// W = π₁E.
    pub fn decision_nodes(&self) -> BTreeSet<Atom> {
        self.edges.iter().map(|(w, _)| w.clone()).collect()
    }

    /// Y = π₂E.
    pub fn successors(&self) -> BTreeSet<Atom> {
        self.parent.keys().cloned().collect()
    }

    /// The immediate-predecessor function p.
    pub fn predecessor(&self) -> &BTreeMap<Atom, Atom> {
        &self.parent
    }

    /// Y \ W.
    pub fn end_nodes(&self) -> BTreeSet<Atom> {
        let ws = self.decision_nodes();
        self.parent.keys().filter(|y| !ws.contains(*y)).cloned().collect()
    }

    fn require(&self, x: &Atom) -> Result<(), TreeError> {
        if self.nodes.contains(x) {
            Ok(())
        } else {
            Err(TreeError::UnknownNode(x.clone()))
        }
    }

    /// Whether `x1` lies on the chain from `x2` up to the root.
    fn ascends_to(&self, x2: &Atom, x1: &Atom) -> bool {
        let mut x = x2;
        loop {
            if x == x1 {
                return true;
            }
            match self.parent.get(x) {
                Some(p) => x = p,
                None => return false,
            }
        }
    }

    pub fn precedes(&self, x1: &Atom, x2: &Atom) -> Result<Precedence, TreeError> {
        self.require(x1)?;
        self.require(x2)?;
        Ok(if x1 == x2 {
            Precedence::Equal
        } else if self.ascends_to(x2, x1) {
            Precedence::Before
        } else if self.ascends_to(x1, x2) {
            Precedence::After
        } else {
            Precedence::Incomparable
        })
    }

    /// x1 ⪯ x2; false for unknown nodes.
    pub fn weakly_precedes(&self, x1: &Atom, x2: &Atom) -> bool {
        self.nodes.contains(x1) && self.nodes.contains(x2) && self.ascends_to(x2, x1)
    }

    /// x1 ≺ x2; false for unknown nodes.
    pub fn strictly_precedes(&self, x1: &Atom, x2: &Atom) -> bool {
        x1 != x2 && self.weakly_precedes(x1, x2)
    }

    /// The weak precedence order as a set of pairs.
    pub fn weak_order(&self) -> BTreeSet<Edge> {
        self.nodes
            .iter()
            .flat_map(|x| {
                self.path_from_root(x)
                    .expect("x is a node")
                    .into_iter()
                    .map(move |a| (a, x.clone()))
            })
            .collect()
    }

    /// The strict precedence order as a set of pairs.
    pub fn strict_order(&self) -> BTreeSet<Edge> {
        self.weak_order().into_iter().filter(|(a, b)| a != b).collect()
    }

    /// The nodes of the unique path from the root to `x`, root first.
    pub fn path_from_root(&self, x: &Atom) -> Result<Vec<Atom>, TreeError> {
        self.require(x)?;
        let mut path = vec![x.clone()];
        let mut cur = x;
        while let Some(p) = self.parent.get(cur) {
            path.push(p.clone());
            cur = p;
        }
        path.reverse();
        Ok(path)
    }

    /// One finite run per end node.
    pub fn runs(&self) -> BTreeSet<Run> {
        self.end_nodes()
            .iter()
            .map(|z| Run {
                nodes: self.path_from_root(z).expect("end nodes are nodes").into_iter().collect(),
            })
            .collect()
    }
}

/// A finite run, identified by its node set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Run {
    pub nodes: BTreeSet<Atom>,
}

impl Run {
    pub fn new(nodes: BTreeSet<Atom>) -> Self {
        Run { nodes }
    }

    /// The host tree's edges with both endpoints in the run.
    pub fn induced_edges(&self, tree: &OutTree) -> BTreeSet<Edge> {
        tree.edges()
            .iter()
            .filter(|(w, y)| self.nodes.contains(w) && self.nodes.contains(y))
            .cloned()
            .collect()
    }
}

impl fmt::Display for Run {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", join(&self.nodes))
    }
}

/// Points every edge of `t` away from its root.
pub fn orient_divergently(t: &RootedTree) -> OutTree {
    let adj = adjacency(&t.edges);
    let parent = bfs_order(&adj, &t.root);
    let parent: BTreeMap<Atom, Atom> = parent
        .into_iter()
        .filter(|(c, p)| c != p)
        .map(|(c, p)| (c.clone(), p.clone()))
        .collect();
    OutTree {
        nodes: t.nodes.clone(),
        edges: parent.iter().map(|(c, p)| (p.clone(), c.clone())).collect(),
        root: t.root.clone(),
        parent,
    }
}

/// Forgets edge directions, keeping the root.
pub fn underlying_rooted(o: &OutTree) -> RootedTree {
    RootedTree {
        nodes: o.nodes.clone(),
        edges: o
            .edges
            .iter()
            .map(|(a, b)| if a < b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) })
            .collect(),
        root: o.root.clone(),
    }
}

/// (X, π_WY(Q)) for a relation satisfying [Pw←y], [Py] and [Pr].
pub fn out_tree_of(q: &QuintupleSet) -> Result<OutTree, TreeError> {
    for axiom in [AxiomId::PwY, AxiomId::Py, AxiomId::Pr] {
        check_axiom(q, axiom).map_err(|v| TreeError::Axiom(Box::new(v)))?;
    }
    let edges = q.iter().map(|r| (r.w.clone(), r.y.clone())).collect();
    OutTree::new(q.nodes(), edges)
}
