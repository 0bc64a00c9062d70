//! Quintuple sets and their slice/projection algebra.
//!
//! Nothing here assumes any axiom: every operation is defined for an
//! arbitrary finite set of quintuples.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::value::{Atom, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelationError {
    #[error("a projection needs at least one coordinate")]
    EmptyCoords,
    #[error("coordinate {0} appears more than once")]
    RepeatedCoord(Coord),
    #[error("unknown coordinate `{0}` (expected one of I, J, W, A, Y)")]
    UnknownCoord(char),
    #[error("situation {0} does not occur in the relation")]
    UnknownSituation(Value),
    #[error("no unique root: W \\ Y = {{{}}}", join(.0))]
    NoUniqueRoot(BTreeSet<Atom>),
}

pub(crate) fn join<'a, T: fmt::Display + 'a>(items: impl IntoIterator<Item = &'a T>) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// One of the five positions of a quintuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coord {
    I,
    J,
    W,
    A,
    Y,
}

impl Coord {
    pub const ALL: [Coord; 5] = [Coord::I, Coord::J, Coord::W, Coord::A, Coord::Y];

    pub fn letter(self) -> char {
        match self {
            Coord::I => 'I',
            Coord::J => 'J',
            Coord::W => 'W',
            Coord::A => 'A',
            Coord::Y => 'Y',
        }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl TryFrom<char> for Coord {
    type Error = RelationError;

    fn try_from(c: char) -> Result<Self, Self::Error> {
        match c.to_ascii_uppercase() {
            'I' => Ok(Coord::I),
            'J' => Ok(Coord::J),
            'W' => Ok(Coord::W),
            'A' => Ok(Coord::A),
            'Y' => Ok(Coord::Y),
            _ => Err(RelationError::UnknownCoord(c)),
        }
    }
}

/// A validated coordinate sequence: nonempty, no repeats, order significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coords(Vec<Coord>);

impl Coords {
    pub fn new(coords: impl IntoIterator<Item = Coord>) -> Result<Self, RelationError> {
        let coords: Vec<Coord> = coords.into_iter().collect();
        if coords.is_empty() {
            return Err(RelationError::EmptyCoords);
        }
        let mut seen = BTreeSet::new();
        for &c in &coords {
            if !seen.insert(c) {
                return Err(RelationError::RepeatedCoord(c));
            }
        }
        Ok(Coords(coords))
    }

    pub fn as_slice(&self) -> &[Coord] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for Coords {
    type Err = RelationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let cs = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(Coord::try_from)
            .collect::<Result<Vec<_>, _>>()?;
        Coords::new(cs)
    }
}

impl fmt::Display for Coords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.0 {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A quintuple `⟨i, j, w, a, y⟩`: player, situation, decision node, action,
/// successor node. Only the player and situation may be node sets.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quintuple {
    pub i: Value,
    pub j: Value,
    pub w: Atom,
    pub a: Atom,
    pub y: Atom,
}

impl Quintuple {
    pub fn new(i: Value, j: Value, w: Atom, a: Atom, y: Atom) -> Self {
        Quintuple { i, j, w, a, y }
    }

    /// Builds a quintuple from shorthand strings (see [`Value`]'s `FromStr`).
    pub fn parse(i: &str, j: &str, w: &str, a: &str, y: &str) -> Result<Self, crate::value::ValueError> {
        Ok(Quintuple {
            i: i.parse()?,
            j: j.parse()?,
            w: w.parse()?,
            a: a.parse()?,
            y: y.parse()?,
        })
    }

    pub fn get(&self, c: Coord) -> Value {
        match c {
            Coord::I => self.i.clone(),
            Coord::J => self.j.clone(),
            Coord::W => Value::Atom(self.w.clone()),
            Coord::A => Value::Atom(self.a.clone()),
            Coord::Y => Value::Atom(self.y.clone()),
        }
    }
}

impl fmt::Display for Quintuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{}, {}, {}, {}, {}⟩", self.i, self.j, self.w, self.a, self.y)
    }
}

/// A finite set of quintuples. Iteration follows the canonical order on
/// `(i, j, w, a, y)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuintupleSet {
    rows: BTreeSet<Quintuple>,
}

impl QuintupleSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns `false` if the row was already present.
    pub fn insert(&mut self, row: Quintuple) -> bool {
        self.rows.insert(row)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn contains(&self, row: &Quintuple) -> bool {
        self.rows.contains(row)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Quintuple> + '_ {
        self.rows.iter()
    }

    pub fn rows(&self) -> &BTreeSet<Quintuple> {
        &self.rows
    }

    pub fn is_subset(&self, other: &QuintupleSet) -> bool {
        self.rows.is_subset(&other.rows)
    }

    pub fn union(&self, other: &QuintupleSet) -> QuintupleSet {
        self.rows.union(&other.rows).cloned().collect()
    }

    pub fn difference(&self, other: &QuintupleSet) -> QuintupleSet {
        self.rows.difference(&other.rows).cloned().collect()
    }

    pub fn filter(&self, mut keep: impl FnMut(&Quintuple) -> bool) -> QuintupleSet {
        self.rows.iter().filter(|r| keep(r)).cloned().collect()
    }

    /// π_c(Q): the rows restricted to `coords`, in the given order.
    pub fn project(&self, coords: &Coords) -> TupleRelation {
        let tuples = self
            .rows
            .iter()
            .map(|r| coords.as_slice().iter().map(|&c| r.get(c)).collect())
            .collect();
        TupleRelation {
            coords: coords.clone(),
            tuples,
        }
    }

    /// Q_j: every row whose situation is `j` (empty when `j` is absent).
    pub fn slice(&self, j: &Value) -> QuintupleSet {
        self.filter(|r| &r.j == j)
    }

    /// The slice partition ⟨Q_j⟩ indexed by π_J(Q).
    pub fn slice_partition(&self) -> BTreeMap<Value, QuintupleSet> {
        let mut out: BTreeMap<Value, QuintupleSet> = BTreeMap::new();
        for r in &self.rows {
            out.entry(r.j.clone()).or_default().insert(r.clone());
        }
        out
    }

    pub fn players(&self) -> BTreeSet<Value> {
        self.rows.iter().map(|r| r.i.clone()).collect()
    }

    pub fn situations(&self) -> BTreeSet<Value> {
        self.rows.iter().map(|r| r.j.clone()).collect()
    }

    pub fn decision_nodes(&self) -> BTreeSet<Atom> {
        self.rows.iter().map(|r| r.w.clone()).collect()
    }

    pub fn actions(&self) -> BTreeSet<Atom> {
        self.rows.iter().map(|r| r.a.clone()).collect()
    }

    pub fn successors(&self) -> BTreeSet<Atom> {
        self.rows.iter().map(|r| r.y.clone()).collect()
    }

    pub fn components(&self) -> Components {
        Components {
            players: self.players(),
            situations: self.situations(),
            decision_nodes: self.decision_nodes(),
            actions: self.actions(),
            successors: self.successors(),
        }
    }

    /// X = W ∪ Y.
    pub fn nodes(&self) -> BTreeSet<Atom> {
        self.rows
            .iter()
            .flat_map(|r| [r.w.clone(), r.y.clone()])
            .collect()
    }

    /// W \ Y.
    pub fn start_nodes(&self) -> BTreeSet<Atom> {
        let ys = self.successors();
        self.decision_nodes()
            .into_iter()
            .filter(|w| !ys.contains(w))
            .collect()
    }

    /// Y \ W.
    pub fn end_nodes(&self) -> BTreeSet<Atom> {
        let ws = self.decision_nodes();
        self.successors()
            .into_iter()
            .filter(|y| !ws.contains(y))
            .collect()
    }

    /// The sole member of W \ Y.
    pub fn root(&self) -> Result<Atom, RelationError> {
        let starts = self.start_nodes();
        if starts.len() == 1 {
            Ok(starts.into_iter().next().unwrap())
        } else {
            Err(RelationError::NoUniqueRoot(starts))
        }
    }

    /// W_j = π_W(Q_j).
    pub fn info_set(&self, j: &Value) -> Result<BTreeSet<Atom>, RelationError> {
        let nodes: BTreeSet<Atom> = self
            .rows
            .iter()
            .filter(|r| &r.j == j)
            .map(|r| r.w.clone())
            .collect();
        if nodes.is_empty() {
            return Err(RelationError::UnknownSituation(j.clone()));
        }
        Ok(nodes)
    }

    /// A_j = π_A(Q_j).
    pub fn action_set(&self, j: &Value) -> Result<BTreeSet<Atom>, RelationError> {
        let acts: BTreeSet<Atom> = self
            .rows
            .iter()
            .filter(|r| &r.j == j)
            .map(|r| r.a.clone())
            .collect();
        if acts.is_empty() {
            return Err(RelationError::UnknownSituation(j.clone()));
        }
        Ok(acts)
    }

    /// p = π_YW(Q) as a relation; it is a function only when every successor
    /// has exactly one decision node.
    pub fn predecessor_relation(&self) -> TupleRelation {
        self.project(&Coords(vec![Coord::Y, Coord::W]))
    }

    /// p as a map, or `None` when some successor has two decision nodes.
    pub fn predecessor_map(&self) -> Option<BTreeMap<Atom, Atom>> {
        let mut p = BTreeMap::new();
        for r in &self.rows {
            if let Some(prev) = p.insert(r.y.clone(), r.w.clone()) {
                if prev != r.w {
                    return None;
                }
            }
        }
        Some(p)
    }

    /// F = π_WA(Q).
    pub fn feasibility(&self) -> Feasibility {
        let mut map: BTreeMap<Atom, BTreeSet<Atom>> = BTreeMap::new();
        for r in &self.rows {
            map.entry(r.w.clone()).or_default().insert(r.a.clone());
        }
        Feasibility(map)
    }
}

impl FromIterator<Quintuple> for QuintupleSet {
    fn from_iter<T: IntoIterator<Item = Quintuple>>(iter: T) -> Self {
        QuintupleSet {
            rows: iter.into_iter().collect(),
        }
    }
}

impl Extend<Quintuple> for QuintupleSet {
    fn extend<T: IntoIterator<Item = Quintuple>>(&mut self, iter: T) {
        self.rows.extend(iter)
    }
}

impl<'a> IntoIterator for &'a QuintupleSet {
    type Item = &'a Quintuple;
    type IntoIter = std::collections::btree_set::Iter<'a, Quintuple>;

    fn into_iter(self) -> Self::IntoIter {
        self.rows.iter()
    }
}

impl IntoIterator for QuintupleSet {
    type Item = Quintuple;
    type IntoIter = std::collections::btree_set::IntoIter<Quintuple>;

    fn into_iter(self) -> Self::IntoIter {
        self.rows.into_iter()
    }
}

/// The five single-coordinate projections I, J, W, A, Y.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    pub players: BTreeSet<Value>,
    pub situations: BTreeSet<Value>,
    pub decision_nodes: BTreeSet<Atom>,
    pub actions: BTreeSet<Atom>,
    pub successors: BTreeSet<Atom>,
}

/// A projection result: a duplicate-free set of equal-length tuples.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TupleRelation {
    coords: Coords,
    tuples: BTreeSet<Vec<Value>>,
}

impl TupleRelation {
    pub fn coords(&self) -> &Coords {
        &self.coords
    }

    pub fn arity(&self) -> usize {
        self.coords.len()
    }

    pub fn tuples(&self) -> &BTreeSet<Vec<Value>> {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, tuple: &[Value]) -> bool {
        self.tuples.contains(tuple)
    }

    pub fn is_subset(&self, other: &TupleRelation) -> bool {
        self.tuples.is_subset(&other.tuples)
    }

    /// Whether the first `k` coordinates determine the rest.
    pub fn is_function_of_prefix(&self, k: usize) -> bool {
        let mut seen: BTreeMap<&[Value], &[Value]> = BTreeMap::new();
        for t in &self.tuples {
            let (key, rest) = t.split_at(k.min(t.len()));
            if let Some(prev) = seen.insert(key, rest) {
                if prev != rest {
                    return false;
                }
            }
        }
        true
    }

    /// Whether the relation is a function from its first coordinate.
    pub fn is_functional(&self) -> bool {
        self.is_function_of_prefix(1)
    }
}

impl fmt::Display for TupleRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, t) in self.tuples.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            if t.len() == 1 {
                write!(f, "{}", t[0])?;
            } else {
                write!(f, "⟨{}⟩", join(t).replace(',', ", "))?;
            }
        }
        f.write_str("}")
    }
}

/// The feasibility correspondence F, looked up node by node.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Feasibility(BTreeMap<Atom, BTreeSet<Atom>>);

static NO_ACTIONS: BTreeSet<Atom> = BTreeSet::new();

impl Feasibility {
    /// F(w); nodes outside W have no feasible actions.
    pub fn at(&self, w: &Atom) -> &BTreeSet<Atom> {
        self.0.get(w).unwrap_or(&NO_ACTIONS)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Atom, &BTreeSet<Atom>)> + '_ {
        self.0.iter()
    }

    pub fn as_map(&self) -> &BTreeMap<Atom, BTreeSet<Atom>> {
        &self.0
    }
}
