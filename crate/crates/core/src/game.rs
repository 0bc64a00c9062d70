//! Pentaform games, tree-adorned (Gm) games, and the operators between them.
//!
//! `pentaform_of` expands each edge ⟨w, y⟩ of a Gm game into the quintuple
//! ⟨τ(w), H_w, w, λ(w, y), y⟩. `standardize` goes the other way by
//! projection. The two are mutually inverse on pentaform games whose
//! situations are their own information sets.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::axioms::{self, Violation};
use crate::relation::{join, Quintuple, QuintupleSet};
use crate::tree::{out_tree_of, Edge, OutTree, Run};
use crate::value::{Atom, Value};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GameError {
    #[error("not a pentaform: {0}")]
    NotPentaform(Box<Violation>),
    #[error("utility profile does not match the game: {0}")]
    Utility(String),
    #[error("situations are not information sets (situation {0})")]
    NotInformationSetSituations(Value),
    #[error("utility value is NaN")]
    NotANumber,
}

/// A point of ℝ ∪ {−∞, +∞}. Only storage and comparison are provided.
#[derive(Debug, Clone, Copy)]
pub enum ExtendedReal {
    NegInf,
    /// Never NaN when built through [`ExtendedReal::from_f64`].
    Finite(f64),
    PosInf,
}

impl ExtendedReal {
    pub fn from_f64(x: f64) -> Result<Self, GameError> {
        if x.is_nan() {
            Err(GameError::NotANumber)
        } else if x == f64::INFINITY {
            Ok(ExtendedReal::PosInf)
        } else if x == f64::NEG_INFINITY {
            Ok(ExtendedReal::NegInf)
        } else {
            // -0.0 and 0.0 are one point
            Ok(ExtendedReal::Finite(x + 0.0))
        }
    }

    fn rank(&self) -> u8 {
        match self {
            ExtendedReal::NegInf => 0,
            ExtendedReal::Finite(_) => 1,
            ExtendedReal::PosInf => 2,
        }
    }
}

impl Ord for ExtendedReal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => (a + 0.0).total_cmp(&(b + 0.0)),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for ExtendedReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for ExtendedReal {}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::NegInf => f.write_str("-inf"),
            ExtendedReal::Finite(x) => write!(f, "{x}"),
            ExtendedReal::PosInf => f.write_str("inf"),
        }
    }
}

/// ⟨u_i : 𝒵 → ℝ̄⟩ with runs keyed by their node sets.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UtilityProfile(BTreeMap<Value, BTreeMap<Run, ExtendedReal>>);

impl UtilityProfile {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, player: Value, run: impl Into<Run>, value: ExtendedReal) {
        self.0.entry(player).or_default().insert(run.into(), value);
    }

    pub fn get(&self, player: &Value, run: &Run) -> Option<ExtendedReal> {
        self.0.get(player)?.get(run).copied()
    }

    pub fn players(&self) -> BTreeSet<Value> {
        self.0.keys().cloned().collect()
    }

    pub fn player(&self, player: &Value) -> Option<&BTreeMap<Run, ExtendedReal>> {
        self.0.get(player)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Value, &BTreeMap<Run, ExtendedReal>)> + '_ {
        self.0.iter()
    }

    /// Checks that the players are exactly `players` and that every u_i is
    /// defined on exactly `runs`.
    pub fn check_against(&self, players: &BTreeSet<Value>, runs: &BTreeSet<Run>) -> Result<(), String> {
        let mine = self.players();
        if &mine != players {
            return Err(format!(
                "utility players {{{}}} differ from the game's players {{{}}}",
                join(&mine),
                join(players)
            ));
        }
        for (i, ui) in &self.0 {
            if let Some(z) = runs.iter().find(|z| !ui.contains_key(*z)) {
                return Err(format!("u_{i} is undefined on run {z}"));
            }
            if let Some(z) = ui.keys().find(|z| !runs.contains(*z)) {
                return Err(format!("u_{i} is defined on {z}, which is not a run"));
            }
        }
        Ok(())
    }
}

impl From<BTreeSet<Atom>> for Run {
    fn from(nodes: BTreeSet<Atom>) -> Self {
        Run::new(nodes)
    }
}

/// A validated pair (Q, u).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PentaformGame {
    q: QuintupleSet,
    u: UtilityProfile,
}

impl PentaformGame {
    pub fn new(q: QuintupleSet, u: UtilityProfile) -> Result<Self, GameError> {
        let report = axioms::validate(&q);
        if let Some(v) = report.violations().next() {
            return Err(GameError::NotPentaform(Box::new(v.clone())));
        }
        let tree = out_tree_of(&q).expect("pentaforms have out-trees");
        u.check_against(&q.players(), &tree.runs()).map_err(GameError::Utility)?;
        Ok(PentaformGame { q, u })
    }

    pub fn relation(&self) -> &QuintupleSet {
        &self.q
    }

    pub fn utility(&self) -> &UtilityProfile {
        &self.u
    }

    pub fn tree(&self) -> OutTree {
        out_tree_of(&self.q).expect("pentaforms have out-trees")
    }

    pub fn into_parts(self) -> (QuintupleSet, UtilityProfile) {
        (self.q, self.u)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GmCondition {
    /// (X, E) is a nontrivial out-tree.
    Gm1,
    /// 𝓗 partitions W.
    Gm2,
    /// λ is a locally injective function from E.
    Gm3,
    /// F is constant on each information set.
    Gm4,
    /// τ is a function from W, constant on each information set.
    Gm5,
    /// u assigns every player in I a utility on every run.
    Gm6,
}

impl fmt::Display for GmCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self:?}]")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{condition} fails: {message}")]
pub struct GmViolation {
    pub condition: GmCondition,
    pub message: String,
}

/// Unchecked components (X, E, 𝓗, λ, τ, u).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RawGmGame {
    pub nodes: BTreeSet<Atom>,
    pub edges: BTreeSet<Edge>,
    pub info_sets: BTreeSet<BTreeSet<Atom>>,
    pub labels: BTreeMap<Edge, Atom>,
    pub control: BTreeMap<Atom, Value>,
    pub utility: UtilityProfile,
}

impl RawGmGame {
    /// Checks [Gm1]–[Gm6]; every failing condition is reported.
    pub fn validate(self) -> Result<GmGame, Vec<GmViolation>> {
        let mut out = Vec::new();
        let mut fail = |condition, message: String| out.push(GmViolation { condition, message });

        let tree = match OutTree::new(self.nodes.clone(), self.edges.clone()) {
            Ok(t) if t.is_trivial() => {
                fail(GmCondition::Gm1, "the out-tree has no edges".into());
                None
            }
            Ok(t) => Some(t),
            Err(e) => {
                fail(GmCondition::Gm1, e.to_string());
                None
            }
        };
        let ws: BTreeSet<Atom> = self.edges.iter().map(|(w, _)| w.clone()).collect();

        // Gm2
        if let Some(empty) = self.info_sets.iter().find(|h| h.is_empty()) {
            let _ = empty;
            fail(GmCondition::Gm2, "an information set is empty".into());
        }
        let mut owner: BTreeMap<&Atom, &BTreeSet<Atom>> = BTreeMap::new();
        for h in &self.info_sets {
            for w in h {
                if let Some(other) = owner.insert(w, h) {
                    fail(
                        GmCondition::Gm2,
                        format!("node {w} lies in {{{}}} and {{{}}}", join(other), join(h)),
                    );
                }
            }
        }
        if let Some(w) = ws.iter().find(|w| !owner.contains_key(w)) {
            fail(GmCondition::Gm2, format!("decision node {w} is in no information set"));
        }
        if let Some(w) = owner.keys().find(|w| !ws.contains(**w)) {
            fail(GmCondition::Gm2, format!("{w} is in an information set but is not a decision node"));
        }

        // Gm3
        if let Some((w, y)) = self.edges.iter().find(|e| !self.labels.contains_key(*e)) {
            fail(GmCondition::Gm3, format!("λ is undefined on ⟨{w}, {y}⟩"));
        }
        if let Some((w, y)) = self.labels.keys().find(|e| !self.edges.contains(*e)) {
            fail(GmCondition::Gm3, format!("λ is defined on ⟨{w}, {y}⟩, which is not an edge"));
        }
        let mut seen: BTreeMap<(&Atom, &Atom), &Atom> = BTreeMap::new();
        for ((w, y), a) in &self.labels {
            if let Some(y0) = seen.insert((w, a), y) {
                fail(
                    GmCondition::Gm3,
                    format!("edges ⟨{w}, {y0}⟩ and ⟨{w}, {y}⟩ share the action {a}"),
                );
                break;
            }
        }

        // Gm4
        let feasible = feasibility_of(&self.labels, &self.edges);
        for h in &self.info_sets {
            let mut sets = h.iter().map(|w| (w, feasible.get(w)));
            if let Some((w0, f0)) = sets.next() {
                if let Some((w, _)) = sets.find(|(_, f)| *f != f0) {
                    fail(
                        GmCondition::Gm4,
                        format!("nodes {w0} and {w} share an information set but not their feasible actions"),
                    );
                }
            }
        }

        // Gm5
        if let Some(w) = ws.iter().find(|w| !self.control.contains_key(*w)) {
            fail(GmCondition::Gm5, format!("τ is undefined at decision node {w}"));
        }
        if let Some(w) = self.control.keys().find(|w| !ws.contains(*w)) {
            fail(GmCondition::Gm5, format!("τ is defined at {w}, which is not a decision node"));
        }
        for h in &self.info_sets {
            let players: BTreeSet<&Value> = h.iter().filter_map(|w| self.control.get(w)).collect();
            if players.len() > 1 {
                fail(
                    GmCondition::Gm5,
                    format!("information set {{{}}} has players {{{}}}", join(h), join(players)),
                );
            }
        }

        // Gm6
        if let Some(t) = &tree {
            let players: BTreeSet<Value> = self.control.values().cloned().collect();
            if let Err(m) = self.utility.check_against(&players, &t.runs()) {
                fail(GmCondition::Gm6, m);
            }
        }

        match (out.is_empty(), tree) {
            (true, Some(tree)) => Ok(GmGame { raw: self, tree }),
            _ => Err(out),
        }
    }
}

fn feasibility_of(labels: &BTreeMap<Edge, Atom>, edges: &BTreeSet<Edge>) -> BTreeMap<Atom, BTreeSet<Atom>> {
    let mut f: BTreeMap<Atom, BTreeSet<Atom>> = BTreeMap::new();
    for ((w, y), a) in labels {
        if edges.contains(&(w.clone(), y.clone())) {
            f.entry(w.clone()).or_default().insert(a.clone());
        }
    }
    f
}

/// A game (X, E, 𝓗, λ, τ, u) satisfying [Gm1]–[Gm6].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GmGame {
    raw: RawGmGame,
    tree: OutTree,
}

impl GmGame {
    pub fn nodes(&self) -> &BTreeSet<Atom> {
        &self.raw.nodes
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.raw.edges
    }

    pub fn info_sets(&self) -> &BTreeSet<BTreeSet<Atom>> {
        &self.raw.info_sets
    }

    pub fn labels(&self) -> &BTreeMap<Edge, Atom> {
        &self.raw.labels
    }

    pub fn control(&self) -> &BTreeMap<Atom, Value> {
        &self.raw.control
    }

    pub fn utility(&self) -> &UtilityProfile {
        &self.raw.utility
    }

    pub fn tree(&self) -> &OutTree {
        &self.tree
    }

    pub fn raw(&self) -> &RawGmGame {
        &self.raw
    }

    pub fn into_raw(self) -> RawGmGame {
        self.raw
    }

    /// W = π₁E.
    pub fn decision_nodes(&self) -> BTreeSet<Atom> {
        self.tree.decision_nodes()
    }

    /// A, the range of λ.
    pub fn actions(&self) -> BTreeSet<Atom> {
        self.raw.labels.values().cloned().collect()
    }

    /// I, the range of τ.
    pub fn players(&self) -> BTreeSet<Value> {
        self.raw.control.values().cloned().collect()
    }

    /// F(w) = { λ(w, y) : ⟨w, y⟩ ∈ E }.
    pub fn feasibility(&self) -> BTreeMap<Atom, BTreeSet<Atom>> {
        feasibility_of(&self.raw.labels, &self.raw.edges)
    }

    /// H_w, the information set containing `w`.
    pub fn info_set_of(&self, w: &Atom) -> Option<&BTreeSet<Atom>> {
        self.raw.info_sets.iter().find(|h| h.contains(w))
    }
}

/// Whether every situation equals its own information set.
pub fn has_information_set_situations(q: &QuintupleSet) -> bool {
    first_non_information_set_situation(q).is_none()
}

fn first_non_information_set_situation(q: &QuintupleSet) -> Option<Value> {
    q.slice_partition()
        .into_iter()
        .find(|(j, s)| j.as_set() != Some(&s.decision_nodes()))
        .map(|(j, _)| j)
}

/// Operator P.
pub fn pentaform_of(g: &GmGame) -> PentaformGame {
    let q: QuintupleSet = g
        .edges()
        .iter()
        .map(|(w, y)| {
            Quintuple::new(
                g.control()[w].clone(),
                Value::Set(g.info_set_of(w).expect("𝓗 partitions W").clone()),
                w.clone(),
                g.labels()[&(w.clone(), y.clone())].clone(),
                y.clone(),
            )
        })
        .collect();
    PentaformGame::new(q, g.utility().clone()).expect("P maps Gm games to pentaform games")
}

/// Operator S.
pub fn standardize(pg: &PentaformGame) -> GmGame {
    let q = pg.relation();
    RawGmGame {
        nodes: q.nodes(),
        edges: q.iter().map(|r| (r.w.clone(), r.y.clone())).collect(),
        info_sets: q.slice_partition().values().map(|s| s.decision_nodes()).collect(),
        labels: q.iter().map(|r| ((r.w.clone(), r.y.clone()), r.a.clone())).collect(),
        control: q.iter().map(|r| (r.w.clone(), r.i.clone())).collect(),
        utility: pg.utility().clone(),
    }
    .validate()
    .expect("S maps pentaform games to Gm games")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RoundTrip {
    /// The composite returned its input unchanged.
    Identity,
    /// PS replaced the situations by their information sets.
    Rewritten(Box<PentaformGame>),
    /// The named components differ.
    Mismatch(Vec<&'static str>),
}

impl RoundTrip {
    pub fn is_identity(&self) -> bool {
        matches!(self, RoundTrip::Identity)
    }
}

/// Compares SP(g) with g component by component.
pub fn sp_roundtrip(g: &GmGame) -> RoundTrip {
    let back = standardize(&pentaform_of(g));
    let mut diff = Vec::new();
    let (a, b) = (g.raw(), back.raw());
    if a.nodes != b.nodes {
        diff.push("X");
    }
    if a.edges != b.edges {
        diff.push("E");
    }
    if a.info_sets != b.info_sets {
        diff.push("H");
    }
    if a.labels != b.labels {
        diff.push("λ");
    }
    if a.control != b.control {
        diff.push("τ");
    }
    if a.utility != b.utility {
        diff.push("u");
    }
    if diff.is_empty() {
        RoundTrip::Identity
    } else {
        RoundTrip::Mismatch(diff)
    }
}

/// Compares PS(pg) with pg. Without information-set situations the image is
/// the information-set rewrite of `pg`, reported as [`RoundTrip::Rewritten`].
pub fn ps_roundtrip(pg: &PentaformGame) -> RoundTrip {
    let image = pentaform_of(&standardize(pg));
    if &image == pg {
        return RoundTrip::Identity;
    }
    if !has_information_set_situations(pg.relation()) {
        return RoundTrip::Rewritten(Box::new(image));
    }
    let mut diff = Vec::new();
    if image.relation() != pg.relation() {
        diff.push("Q");
    }
    if image.utility() != pg.utility() {
        diff.push("u");
    }
    RoundTrip::Mismatch(diff)
}

/// One named equality between a Gm game and its pentaform counterpart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equality {
    pub label: char,
    pub statement: &'static str,
    pub holds: bool,
}

impl fmt::Display for Equality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.holds { "ok" } else { "FAILED" };
        write!(f, "({}) {:<22} {mark}", self.label, self.statement)
    }
}

/// The sixteen equalities between `g` and `pg`, each side derived
/// from its own structure.
pub fn equivalence_battery(g: &GmGame, pg: &PentaformGame) -> Vec<Equality> {
    let q = pg.relation();
    let q_tree = out_tree_of(q).expect("pentaforms have out-trees");
    let g_tree = g.tree();

    let q_edges: BTreeSet<Edge> = q.iter().map(|r| (r.w.clone(), r.y.clone())).collect();
    let q_pred: BTreeMap<Atom, Atom> = q.predecessor_map().expect("[Pw←y] holds");
    let h_values: BTreeSet<Value> = g.info_sets().iter().cloned().map(Value::Set).collect();
    let q_labels: BTreeMap<Edge, Atom> = q
        .iter()
        .map(|r| ((r.w.clone(), r.y.clone()), r.a.clone()))
        .collect();
    let q_control: BTreeMap<Atom, Value> = q.iter().map(|r| (r.w.clone(), r.i.clone())).collect();
    let g_ws = g.decision_nodes();
    let g_ys: BTreeSet<Atom> = g.edges().iter().map(|(_, y)| y.clone()).collect();
    let g_pred: BTreeMap<Atom, Atom> = g.edges().iter().map(|(w, y)| (y.clone(), w.clone())).collect();

    let rows: [(char, &'static str, bool); 16] = [
        ('a', "X̄ = X", &q.nodes() == g.nodes()),
        ('b', "π_WY(Q̄) = E", &q_edges == g.edges()),
        ('c', "r̄ = r", q.root().ok().as_ref() == Some(g_tree.root())),
        ('d', "W̄ = W", q.decision_nodes() == g_ws),
        ('e', "Ȳ = Y", q.successors() == g_ys),
        ('f', "p̄ = p", q_pred == g_pred),
        ('g', "⪯̄ = ⪯", q_tree.weak_order() == g_tree.weak_order()),
        ('h', "≺̄ = ≺", q_tree.strict_order() == g_tree.strict_order()),
        ('i', "𝒵̄ = 𝒵", q_tree.runs() == g_tree.runs()),
        ('j', "J̄ = 𝓗", q.situations() == h_values),
        ('k', "λ from π_WYA(Q̄) = λ", &q_labels == g.labels()),
        ('l', "Ā = A", q.actions() == g.actions()),
        ('m', "F̄ = F", q.feasibility().as_map() == &g.feasibility()),
        ('n', "π_WI(Q̄) = τ", &q_control == g.control()),
        ('o', "Ī = I", q.players() == g.players()),
        ('p', "ū = u", pg.utility() == g.utility()),
    ];
    rows.into_iter()
        .map(|(label, statement, holds)| Equality { label, statement, holds })
        .collect()
}

/// The equality battery for (Q̄, ū) = P(g).
pub fn gm_battery(g: &GmGame) -> Vec<Equality> {
    equivalence_battery(g, &pentaform_of(g))
}

/// The same battery for a pentaform game with information-set situations
/// and its standardization.
pub fn pentaform_battery(pg: &PentaformGame) -> Result<Vec<Equality>, GameError> {
    if let Some(j) = first_non_information_set_situation(pg.relation()) {
        return Err(GameError::NotInformationSetSituations(j));
    }
    Ok(equivalence_battery(&standardize(pg), pg))
}
