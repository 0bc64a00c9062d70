//! Subgames, block composition and the recall properties.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::axioms::{self, AxiomId, Violation};
use crate::relation::{join, Quintuple, QuintupleSet};
use crate::tree::out_tree_of;
use crate::value::{Atom, Value};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("not a pentaform: {0}")]
    NotPentaform(Box<Violation>),
    #[error("{0} is not a decision node")]
    UnknownNode(Atom),
    #[error("{0} is not a successor node")]
    UnknownSuccessor(Atom),
    #[error("{0} is not a subroot")]
    NotASubroot(Atom),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CompositionError {
    #[error("block {index} is not a block: {violation}")]
    NotABlock { index: usize, violation: Box<Violation> },
    #[error("the blocks are not weakly separated ({0})")]
    NotWeaklySeparated(SeparationVerdict),
    #[error("the blocks are not strongly separated ({0})")]
    NotStronglySeparated(SeparationVerdict),
    #[error("start nodes {{{}}} of the first block are end nodes of the second", join(.0))]
    StartEndClash(BTreeSet<Atom>),
    #[error("the union is not a block: {0}")]
    UnionNotBlock(Box<Violation>),
    #[error("empty sequence")]
    Empty,
    #[error("element {index} is not a pentaform: {violation}")]
    NotPentaform { index: usize, violation: Box<Violation> },
    #[error("element {index} does not contain element {}", .index - 1)]
    NotNested { index: usize },
    #[error("element {index} has root {found}, expected {expected}")]
    RootDrift { index: usize, expected: Atom, found: Atom },
}

fn require_pentaform(q: &QuintupleSet) -> Result<(), AnalysisError> {
    match axioms::validate(q).violations().next() {
        Some(v) => Err(AnalysisError::NotPentaform(Box::new(v.clone()))),
        None => Ok(()),
    }
}

/// ʷQ: the rows whose decision node is weakly after `w`.
pub fn weakly_after(q: &QuintupleSet, w: &Atom) -> Result<QuintupleSet, AnalysisError> {
    require_pentaform(q)?;
    if !q.decision_nodes().contains(w) {
        return Err(AnalysisError::UnknownNode(w.clone()));
    }
    let tree = out_tree_of(q).expect("pentaforms have out-trees");
    Ok(q.filter(|r| tree.weakly_precedes(w, &r.w)))
}

/// T, the decision nodes t whose ᵗJ is disjoint from π_J(Q \ ᵗQ).
pub fn subroots(q: &QuintupleSet) -> Result<BTreeSet<Atom>, AnalysisError> {
    require_pentaform(q)?;
    let tree = out_tree_of(q).expect("pentaforms have out-trees");
    Ok(q.decision_nodes()
        .into_iter()
        .filter(|t| {
            let after = q.filter(|r| tree.weakly_precedes(t, &r.w));
            let rest = q.difference(&after);
            after.situations().is_disjoint(&rest.situations())
        })
        .collect())
}

/// ᵗQ for a subroot `t`; a pentaform with root `t`.
pub fn subgame(q: &QuintupleSet, t: &Atom) -> Result<QuintupleSet, AnalysisError> {
    let after = weakly_after(q, t)?;
    let rest = q.difference(&after);
    if !after.situations().is_disjoint(&rest.situations()) {
        return Err(AnalysisError::NotASubroot(t.clone()));
    }
    Ok(after)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SeparationLevel {
    None,
    Weak,
    Strong,
}

/// What members `first` and `second` of a family share.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharedComponents {
    pub first: usize,
    pub second: usize,
    pub situations: BTreeSet<Value>,
    pub decision_nodes: BTreeSet<Atom>,
    pub successors: BTreeSet<Atom>,
    pub nodes: BTreeSet<Atom>,
}

impl SharedComponents {
    fn weak(&self) -> bool {
        self.situations.is_empty() && self.decision_nodes.is_empty() && self.successors.is_empty()
    }

    fn strong(&self) -> bool {
        self.situations.is_empty() && self.nodes.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationVerdict {
    pub level: SeparationLevel,
    /// Pairs that fall short of strong separation.
    pub witnesses: Vec<SharedComponents>,
}

impl fmt::Display for SeparationVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.level {
            SeparationLevel::None => "not separated",
            SeparationLevel::Weak => "weakly separated",
            SeparationLevel::Strong => "strongly separated",
        };
        f.write_str(level)?;
        for s in &self.witnesses {
            write!(f, "; blocks {} and {} share", s.first, s.second)?;
            if !s.situations.is_empty() {
                write!(f, " situations {{{}}}", join(&s.situations))?;
            }
            if !s.nodes.is_empty() {
                write!(f, " nodes {{{}}}", join(&s.nodes))?;
            }
        }
        Ok(())
    }
}

pub fn separation(family: &[QuintupleSet]) -> SeparationVerdict {
    let parts: Vec<_> = family
        .iter()
        .map(|q| (q.situations(), q.decision_nodes(), q.successors(), q.nodes()))
        .collect();
    let mut level = SeparationLevel::Strong;
    let mut witnesses = Vec::new();
    for (k, a) in parts.iter().enumerate() {
        for (l, b) in parts.iter().enumerate().skip(k + 1) {
            let shared = SharedComponents {
                first: k,
                second: l,
                situations: a.0.intersection(&b.0).cloned().collect(),
                decision_nodes: a.1.intersection(&b.1).cloned().collect(),
                successors: a.2.intersection(&b.2).cloned().collect(),
                nodes: a.3.intersection(&b.3).cloned().collect(),
            };
            if shared.strong() {
                continue;
            }
            level = level.min(if shared.weak() { SeparationLevel::Weak } else { SeparationLevel::None });
            witnesses.push(shared);
        }
    }
    SeparationVerdict { level, witnesses }
}

/// A union of blocks with its start and end nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockUnion {
    pub union: QuintupleSet,
    pub start_nodes: BTreeSet<Atom>,
    pub end_nodes: BTreeSet<Atom>,
}

impl BlockUnion {
    /// The root, when the union has exactly one start node.
    pub fn root(&self) -> Option<&Atom> {
        match self.start_nodes.len() {
            1 => self.start_nodes.iter().next(),
            _ => None,
        }
    }

    pub fn is_pentaform(&self) -> bool {
        self.start_nodes.len() == 1
    }
}

fn require_blocks(family: &[QuintupleSet]) -> Result<(), CompositionError> {
    for (index, q) in family.iter().enumerate() {
        if let Some(v) = AxiomId::BLOCK.iter().find_map(|&ax| axioms::check_axiom(q, ax).err()) {
            return Err(CompositionError::NotABlock { index, violation: Box::new(v) });
        }
    }
    Ok(())
}

fn finish(union: QuintupleSet, start_nodes: BTreeSet<Atom>, end_nodes: BTreeSet<Atom>) -> Result<BlockUnion, CompositionError> {
    if let Some(v) = AxiomId::BLOCK.iter().find_map(|&ax| axioms::check_axiom(&union, ax).err()) {
        return Err(CompositionError::UnionNotBlock(Box::new(v)));
    }
    assert_eq!(start_nodes, union.start_nodes(), "start-node formula disagrees with the union");
    assert_eq!(end_nodes, union.end_nodes(), "end-node formula disagrees with the union");
    Ok(BlockUnion { union, start_nodes, end_nodes })
}

/// Q¹ ∪ Q² for weakly separated blocks whose first start nodes are not
/// end nodes of the second.
pub fn union_pair(q1: &QuintupleSet, q2: &QuintupleSet) -> Result<BlockUnion, CompositionError> {
    let pair = [q1.clone(), q2.clone()];
    require_blocks(&pair)?;
    let verdict = separation(&pair);
    if verdict.level < SeparationLevel::Weak {
        return Err(CompositionError::NotWeaklySeparated(verdict));
    }
    let (s1, e1, s2, e2) = (q1.start_nodes(), q1.end_nodes(), q2.start_nodes(), q2.end_nodes());
    let clash: BTreeSet<Atom> = s1.intersection(&e2).cloned().collect();
    if !clash.is_empty() {
        return Err(CompositionError::StartEndClash(clash));
    }
    let start = s1.union(&s2.difference(&e1).cloned().collect()).cloned().collect();
    let end = e1.difference(&s2).cloned().collect::<BTreeSet<_>>().union(&e2).cloned().collect();
    finish(q1.union(q2), start, end)
}

/// ⋃𝒬 for a strongly separated family of blocks.
pub fn union_family(family: &[QuintupleSet]) -> Result<BlockUnion, CompositionError> {
    require_blocks(family)?;
    let verdict = separation(family);
    if verdict.level < SeparationLevel::Strong {
        return Err(CompositionError::NotStronglySeparated(verdict));
    }
    let mut union = QuintupleSet::new();
    let (mut start, mut end) = (BTreeSet::new(), BTreeSet::new());
    for q in family {
        union.extend(q.iter().cloned());
        start.extend(q.start_nodes());
        end.extend(q.end_nodes());
    }
    finish(union, start, end)
}

/// The union of a nested sequence of pentaforms sharing one root.
pub fn union_chain(seq: &[QuintupleSet]) -> Result<QuintupleSet, CompositionError> {
    if seq.is_empty() {
        return Err(CompositionError::Empty);
    }
    let mut root = None;
    for (index, q) in seq.iter().enumerate() {
        if let Some(v) = axioms::validate(q).violations().next() {
            return Err(CompositionError::NotPentaform { index, violation: Box::new(v.clone()) });
        }
        if index > 0 && !seq[index - 1].is_subset(q) {
            return Err(CompositionError::NotNested { index });
        }
        let r = q.root().expect("pentaforms have roots");
        match &root {
            None => root = Some(r),
            Some(expected) if *expected != r => {
                return Err(CompositionError::RootDrift { index, expected: expected.clone(), found: r })
            }
            Some(_) => {}
        }
    }
    Ok(seq.last().cloned().expect("nonempty"))
}

/// The unique row ending at `y`.
pub fn quintuple_of_successor(q: &QuintupleSet, y: &Atom) -> Result<Quintuple, AnalysisError> {
    require_pentaform(q)?;
    q.iter()
        .find(|r| &r.y == y)
        .cloned()
        .ok_or_else(|| AnalysisError::UnknownSuccessor(y.clone()))
}

/// y₁ ≺ y₂ share a player, y₂ and y₃ share a situation, yet no y₄ ≺ y₃
/// repeats y₁'s situation and action.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RecallWitness {
    pub y1: Atom,
    pub y2: Atom,
    pub y3: Atom,
}

impl fmt::Display for RecallWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y1={}, y2={}, y3={}", self.y1, self.y2, self.y3)
    }
}

/// y₁ ≺ y₂ with j_{y₁} = j_{y₂}.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct AbsentmindednessWitness {
    pub y1: Atom,
    pub y2: Atom,
}

impl fmt::Display for AbsentmindednessWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y1={}, y2={}", self.y1, self.y2)
    }
}

/// Rows keyed by successor, with the successors strictly before each one.
struct SuccessorView<'a> {
    row: BTreeMap<&'a Atom, &'a Quintuple>,
    before: BTreeMap<&'a Atom, Vec<&'a Atom>>,
}

impl<'a> SuccessorView<'a> {
    fn new(q: &'a QuintupleSet) -> Result<Self, AnalysisError> {
        require_pentaform(q)?;
        let row: BTreeMap<&Atom, &Quintuple> = q.iter().map(|r| (&r.y, r)).collect();
        let before = row
            .iter()
            .map(|(&y, _)| {
                let mut chain = Vec::new();
                let mut x = y;
                while let Some(r) = row.get(x) {
                    if row.contains_key(&r.w) {
                        chain.push(&r.w);
                    }
                    x = &r.w;
                }
                (y, chain)
            })
            .collect();
        Ok(SuccessorView { row, before })
    }
}

/// Every violating triple, ordered by (y₂, y₁, y₃).
pub fn perfect_recall_violations(q: &QuintupleSet) -> Result<Vec<RecallWitness>, AnalysisError> {
    let view = SuccessorView::new(q)?;
    // (j, a) pairs occurring strictly before each successor
    let seen: BTreeMap<&Atom, BTreeSet<(&Value, &Atom)>> = view
        .before
        .iter()
        .map(|(&y, chain)| (y, chain.iter().map(|x| (&view.row[x].j, &view.row[x].a)).collect()))
        .collect();
    let mut out = Vec::new();
    for (&y2, r2) in &view.row {
        for &y1 in &sorted(&view.before[y2]) {
            let r1 = view.row[y1];
            if r1.i != r2.i {
                continue;
            }
            for (&y3, r3) in &view.row {
                if r3.j == r2.j && !seen[y3].contains(&(&r1.j, &r1.a)) {
                    out.push(RecallWitness { y1: y1.clone(), y2: y2.clone(), y3: y3.clone() });
                }
            }
        }
    }
    Ok(out)
}

fn sorted<'a>(xs: &[&'a Atom]) -> Vec<&'a Atom> {
    let mut v = xs.to_vec();
    v.sort();
    v
}

/// The first violating triple in (y₂, y₁, y₃) order, if any.
pub fn check_perfect_recall(q: &QuintupleSet) -> Result<Option<RecallWitness>, AnalysisError> {
    Ok(perfect_recall_violations(q)?.into_iter().next())
}

/// The first pair (y₁, y₂) with y₁ ≺ y₂ in one situation, if any.
pub fn check_no_absentmindedness(q: &QuintupleSet) -> Result<Option<AbsentmindednessWitness>, AnalysisError> {
    let view = SuccessorView::new(q)?;
    let mut found = BTreeSet::new();
    for (&y2, r2) in &view.row {
        for &y1 in &view.before[y2] {
            if view.row[y1].j == r2.j {
                found.insert(AbsentmindednessWitness { y1: y1.clone(), y2: y2.clone() });
            }
        }
    }
    Ok(found.into_iter().next())
}
