//! The eight pentaform axioms, the block condition, and the equivalent
//! characterizations of the situation and feasibility axioms.
//!
//! A failed axiom is reported as a [`Violation`] whose witness rows are drawn
//! from the input; checking the same axiom on the witness rows alone fails
//! again. Witnesses are the first ones found under canonical order.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::relation::{join, Quintuple, QuintupleSet};
use crate::value::{Atom, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomError {
    #[error("precondition violated: {0} must hold")]
    Precondition(AxiomId),
    #[error("unknown axiom `{0}`")]
    UnknownAxiom(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AxiomId {
    /// π_JI(Q) is a function.
    PiJ,
    /// π_WJ(Q) is a function.
    PjW,
    /// Each π_WA(Q_j) is a Cartesian product.
    Pwa,
    /// π_WAY(Q) is a function of its first two coordinates.
    PwaY,
    /// π_YW(Q) is a function.
    PwY,
    /// π_YA(Q) is a function.
    PaY,
    /// Every successor node leaves Y under iterated predecessors.
    Py,
    /// W \ Y is a singleton.
    Pr,
}

impl AxiomId {
    pub const ALL: [AxiomId; 8] = [
        AxiomId::PiJ,
        AxiomId::PjW,
        AxiomId::Pwa,
        AxiomId::PwaY,
        AxiomId::PwY,
        AxiomId::PaY,
        AxiomId::Py,
        AxiomId::Pr,
    ];

    /// The seven axioms defining a block.
    pub const BLOCK: [AxiomId; 7] = [
        AxiomId::PiJ,
        AxiomId::PjW,
        AxiomId::Pwa,
        AxiomId::PwaY,
        AxiomId::PwY,
        AxiomId::PaY,
        AxiomId::Py,
    ];

    /// The six axioms inherited by every subset of a pentaform.
    pub const HEREDITARY: [AxiomId; 6] = [
        AxiomId::PiJ,
        AxiomId::PjW,
        AxiomId::PwaY,
        AxiomId::PwY,
        AxiomId::PaY,
        AxiomId::Py,
    ];

    pub fn code(self) -> &'static str {
        match self {
            AxiomId::PiJ => "PI_J",
            AxiomId::PjW => "PJ_W",
            AxiomId::Pwa => "PWA",
            AxiomId::PwaY => "PWA_Y",
            AxiomId::PwY => "PW_Y",
            AxiomId::PaY => "PA_Y",
            AxiomId::Py => "PY",
            AxiomId::Pr => "PR",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            AxiomId::PiJ => "[Pi←j]",
            AxiomId::PjW => "[Pj←w]",
            AxiomId::Pwa => "[Pwa]",
            AxiomId::PwaY => "[Pwa→y]",
            AxiomId::PwY => "[Pw←y]",
            AxiomId::PaY => "[Pa←y]",
            AxiomId::Py => "[Py]",
            AxiomId::Pr => "[Pr]",
        }
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for AxiomId {
    type Err = AxiomError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AxiomId::ALL
            .into_iter()
            .find(|a| a.code().eq_ignore_ascii_case(s) || a.label() == s)
            .ok_or_else(|| AxiomError::UnknownAxiom(s.to_string()))
    }
}

/// A failed axiom with the rows (and, where relevant, nodes) that show it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: AxiomId,
    pub rows: Vec<Quintuple>,
    /// W \ Y for [Pr]; the cycle or the unreachable successor for [Py].
    pub nodes: BTreeSet<Atom>,
    pub message: String,
}

impl Violation {
    fn rows(axiom: AxiomId, rows: Vec<Quintuple>, message: String) -> Self {
        Violation {
            axiom,
            rows,
            nodes: BTreeSet::new(),
            message,
        }
    }

    /// The witness rows as a relation of their own.
    pub fn witness_set(&self) -> QuintupleSet {
        self.rows.iter().cloned().collect()
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails: {}", self.axiom, self.message)
    }
}

impl std::error::Error for Violation {}

/// Finds the first key mapped to two distinct values.
fn functional_witness<K: Ord, V: Ord>(
    q: &QuintupleSet,
    key: impl Fn(&Quintuple) -> K,
    val: impl Fn(&Quintuple) -> V,
) -> Option<(K, Quintuple, Quintuple)> {
    let mut by_key: BTreeMap<K, BTreeMap<V, &Quintuple>> = BTreeMap::new();
    for r in q {
        by_key.entry(key(r)).or_default().entry(val(r)).or_insert(r);
    }
    by_key.into_iter().find_map(|(k, vals)| {
        let mut it = vals.into_values();
        match (it.next(), it.next()) {
            (Some(a), Some(b)) => Some((k, a.clone(), b.clone())),
            _ => None,
        }
    })
}

pub fn check_axiom(q: &QuintupleSet, axiom: AxiomId) -> Result<(), Violation> {
    match axiom {
        AxiomId::PiJ => match functional_witness(q, |r| r.j.clone(), |r| r.i.clone()) {
            None => Ok(()),
            Some((j, a, b)) => {
                let msg = format!("situation {j} has players {} and {}", a.i, b.i);
                Err(Violation::rows(axiom, vec![a, b], msg))
            }
        },
        AxiomId::PjW => match functional_witness(q, |r| r.w.clone(), |r| r.j.clone()) {
            None => Ok(()),
            Some((w, a, b)) => {
                let msg = format!("decision node {w} has situations {} and {}", a.j, b.j);
                Err(Violation::rows(axiom, vec![a, b], msg))
            }
        },
        AxiomId::Pwa => check_rectangular(q),
        AxiomId::PwaY => match functional_witness(q, |r| (r.w.clone(), r.a.clone()), |r| r.y.clone()) {
            None => Ok(()),
            Some(((w, a), r1, r2)) => {
                let msg = format!("node {w} with action {a} leads to both {} and {}", r1.y, r2.y);
                Err(Violation::rows(axiom, vec![r1, r2], msg))
            }
        },
        AxiomId::PwY => match functional_witness(q, |r| r.y.clone(), |r| r.w.clone()) {
            None => Ok(()),
            Some((y, a, b)) => {
                let msg = format!("successor {y} has decision nodes {} and {}", a.w, b.w);
                Err(Violation::rows(axiom, vec![a, b], msg))
            }
        },
        AxiomId::PaY => match functional_witness(q, |r| r.y.clone(), |r| r.a.clone()) {
            None => Ok(()),
            Some((y, a, b)) => {
                let msg = format!("successor {y} is reached by actions {} and {}", a.a, b.a);
                Err(Violation::rows(axiom, vec![a, b], msg))
            }
        },
        AxiomId::Py => match q.predecessor_map() {
            Some(p) => check_set_source(q, &p),
            None => check_reachable_from_starts(q),
        },
        AxiomId::Pr => {
            let starts = q.start_nodes();
            if starts.len() == 1 {
                Ok(())
            } else {
                Err(Violation {
                    axiom,
                    rows: Vec::new(),
                    message: format!("W \\ Y = {{{}}} is not a singleton", join(&starts)),
                    nodes: starts,
                })
            }
        }
    }
}

/// [Pwa]: for each situation, π_WA(Q_j) equals W_j × A_j.
fn check_rectangular(q: &QuintupleSet) -> Result<(), Violation> {
    for (j, slice) in q.slice_partition() {
        let pairs: BTreeSet<(&Atom, &Atom)> = slice.iter().map(|r| (&r.w, &r.a)).collect();
        let ws: BTreeSet<&Atom> = pairs.iter().map(|(w, _)| *w).collect();
        let acts: BTreeSet<&Atom> = pairs.iter().map(|(_, a)| *a).collect();
        for &w in &ws {
            for &a in &acts {
                if !pairs.contains(&(w, a)) {
                    let at_w = slice.iter().find(|r| &r.w == w).unwrap().clone();
                    let with_a = slice.iter().find(|r| &r.a == a).unwrap().clone();
                    let msg = format!(
                        "in situation {j}, node {w} and action {a} both occur but ⟨{w}, {a}⟩ does not"
                    );
                    return Err(Violation::rows(AxiomId::Pwa, vec![at_w, with_a], msg));
                }
            }
        }
    }
    Ok(())
}

/// [Py] when p is a function: every y reaches a non-successor within |Y| steps.
fn check_set_source(q: &QuintupleSet, p: &BTreeMap<Atom, Atom>) -> Result<(), Violation> {
    let steps = exit_steps(p);
    let Some(stuck) = p.keys().find(|y| !steps.contains_key(*y)) else {
        return Ok(());
    };
    // The chain from `stuck` stays in Y forever, so it enters a cycle.
    let mut seen = Vec::new();
    let mut x = stuck.clone();
    while !seen.contains(&x) {
        seen.push(x.clone());
        x = p[&x].clone();
    }
    let start = seen.iter().position(|n| *n == x).unwrap();
    let cycle: BTreeSet<Atom> = seen[start..].iter().cloned().collect();
    let rows = q.iter().filter(|r| cycle.contains(&r.y)).cloned().collect();
    Err(Violation {
        axiom: AxiomId::Py,
        rows,
        message: format!(
            "the predecessor chain from {stuck} never leaves Y; it cycles through {{{}}}",
            join(&cycle)
        ),
        nodes: cycle,
    })
}

/// Number of predecessor steps each successor needs to leave Y; successors
/// that never leave are absent. Bounded by |Y| iterations per successor.
fn exit_steps(p: &BTreeMap<Atom, Atom>) -> BTreeMap<Atom, usize> {
    let bound = p.len();
    let mut out = BTreeMap::new();
    for y in p.keys() {
        let mut x = y;
        for m in 1..=bound {
            x = &p[x];
            if !p.contains_key(x) {
                out.insert(y.clone(), m);
                break;
            }
        }
    }
    out
}

/// For each successor y, the least m ≥ 1 with p^m(y) ∉ Y. Returns `None`
/// when p is not a function; successors that never leave Y are absent.
pub fn successor_exit_steps(q: &QuintupleSet) -> Option<BTreeMap<Atom, usize>> {
    q.predecessor_map().map(|p| exit_steps(&p))
}

/// [Py] when p is not a function: every successor is reachable by an edge
/// path from some node of W \ Y.
fn check_reachable_from_starts(q: &QuintupleSet) -> Result<(), Violation> {
    let mut children: BTreeMap<&Atom, Vec<&Atom>> = BTreeMap::new();
    for r in q {
        children.entry(&r.w).or_default().push(&r.y);
    }
    let starts = q.start_nodes();
    let mut reached: BTreeSet<&Atom> = starts.iter().collect();
    let mut queue: VecDeque<&Atom> = starts.iter().collect();
    while let Some(x) = queue.pop_front() {
        for &c in children.get(x).into_iter().flatten() {
            if reached.insert(c) {
                queue.push_back(c);
            }
        }
    }
    let Some(y) = q.successors().into_iter().find(|y| !reached.contains(y)) else {
        return Ok(());
    };
    // Every row on some backward path into y.
    let mut closure: BTreeSet<Atom> = BTreeSet::from([y.clone()]);
    loop {
        let before = closure.len();
        let more: Vec<Atom> = q
            .iter()
            .filter(|r| closure.contains(&r.y))
            .map(|r| r.w.clone())
            .collect();
        closure.extend(more);
        if closure.len() == before {
            break;
        }
    }
    let rows = q.iter().filter(|r| closure.contains(&r.y)).cloned().collect();
    Err(Violation {
        axiom: AxiomId::Py,
        rows,
        message: format!("successor {y} is not reachable from any start node"),
        nodes: BTreeSet::from([y]),
    })
}

/// Every axiom's outcome for one relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    outcomes: BTreeMap<AxiomId, Result<(), Violation>>,
}

impl AxiomReport {
    pub fn outcome(&self, axiom: AxiomId) -> &Result<(), Violation> {
        &self.outcomes[&axiom]
    }

    pub fn passes(&self, axiom: AxiomId) -> bool {
        self.outcomes[&axiom].is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = (AxiomId, &Result<(), Violation>)> + '_ {
        self.outcomes.iter().map(|(a, r)| (*a, r))
    }

    pub fn failing(&self) -> Vec<AxiomId> {
        self.outcomes
            .iter()
            .filter(|(_, r)| r.is_err())
            .map(|(a, _)| *a)
            .collect()
    }

    pub fn violations(&self) -> impl Iterator<Item = &Violation> + '_ {
        self.outcomes.values().filter_map(|r| r.as_ref().err())
    }

    pub fn is_pentaform(&self) -> bool {
        AxiomId::ALL.iter().all(|a| self.passes(*a))
    }

    pub fn is_block(&self) -> bool {
        AxiomId::BLOCK.iter().all(|a| self.passes(*a))
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, r) in &self.outcomes {
            match r {
                Ok(()) => writeln!(f, "{:<8} {:<8} pass", a.label(), a.code())?,
                Err(v) => writeln!(f, "{:<8} {:<8} FAIL  {}", a.label(), a.code(), v.message)?,
            }
        }
        writeln!(f, "block: {}", self.is_block())?;
        write!(f, "pentaform: {}", self.is_pentaform())
    }
}

pub fn validate(q: &QuintupleSet) -> AxiomReport {
    AxiomReport {
        outcomes: AxiomId::ALL.iter().map(|&a| (a, check_axiom(q, a))).collect(),
    }
}

pub fn is_pentaform(q: &QuintupleSet) -> bool {
    AxiomId::ALL.iter().all(|&a| check_axiom(q, a).is_ok())
}

pub fn is_block(q: &QuintupleSet) -> bool {
    AxiomId::BLOCK.iter().all(|&a| check_axiom(q, a).is_ok())
}

/// Three equivalent forms of [Pj←w].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SituationEquivalence {
    /// π_WJ(Q) is a function.
    pub functional: bool,
    /// Distinct situations have disjoint information sets.
    pub disjoint: bool,
    /// j ↦ W_j is injective and its image partitions W.
    pub indexed_partition: bool,
    pub info_sets: BTreeMap<Value, BTreeSet<Atom>>,
}

impl SituationEquivalence {
    pub fn agree(&self) -> bool {
        self.functional == self.disjoint && self.disjoint == self.indexed_partition
    }
}

pub fn pjw_equivalence(q: &QuintupleSet) -> SituationEquivalence {
    let info_sets: BTreeMap<Value, BTreeSet<Atom>> = q
        .slice_partition()
        .into_iter()
        .map(|(j, s)| (j, s.decision_nodes()))
        .collect();
    let sets: Vec<&BTreeSet<Atom>> = info_sets.values().collect();

    let disjoint = sets
        .iter()
        .enumerate()
        .all(|(k, a)| sets[k + 1..].iter().all(|b| a.is_disjoint(b)));

    let image: BTreeSet<&BTreeSet<Atom>> = sets.iter().copied().collect();
    let injective = image.len() == sets.len();
    let members: Vec<&BTreeSet<Atom>> = image.iter().copied().collect();
    let image_disjoint = members
        .iter()
        .enumerate()
        .all(|(k, a)| members[k + 1..].iter().all(|b| a.is_disjoint(b)));
    let covers = members.iter().flat_map(|s| s.iter()).cloned().collect::<BTreeSet<_>>() == q.decision_nodes();
    let nonempty = members.iter().all(|s| !s.is_empty());

    SituationEquivalence {
        functional: check_axiom(q, AxiomId::PjW).is_ok(),
        disjoint,
        indexed_partition: injective && image_disjoint && covers && nonempty,
        info_sets,
    }
}

/// Four equivalent forms of [Pwa], valid under [Pj←w].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityEquivalence {
    /// Each π_WA(Q_j) is a Cartesian product.
    pub rectangular: bool,
    /// π_WA(Q_j) = W_j × A_j for every j.
    pub product_of_sections: bool,
    /// F(w) = A_j for every w ∈ W_j.
    pub feasible_equals_action_set: bool,
    /// F is constant on every information set.
    pub feasible_constant: bool,
    pub action_sets: BTreeMap<Value, BTreeSet<Atom>>,
}

impl FeasibilityEquivalence {
    pub fn agree(&self) -> bool {
        let v = self.rectangular;
        self.product_of_sections == v && self.feasible_equals_action_set == v && self.feasible_constant == v
    }
}

pub fn pwa_equivalence(q: &QuintupleSet) -> Result<FeasibilityEquivalence, AxiomError> {
    if check_axiom(q, AxiomId::PjW).is_err() {
        return Err(AxiomError::Precondition(AxiomId::PjW));
    }
    let f = q.feasibility();
    let mut product_of_sections = true;
    let mut feasible_equals_action_set = true;
    let mut feasible_constant = true;
    let mut action_sets = BTreeMap::new();
    for j in q.situations() {
        let slice = q.slice(&j);
        let ws = q.info_set(&j).expect("j is a situation of q");
        let acts = q.action_set(&j).expect("j is a situation of q");
        let pairs: BTreeSet<(Atom, Atom)> = slice.iter().map(|r| (r.w.clone(), r.a.clone())).collect();
        let product: BTreeSet<(Atom, Atom)> = ws
            .iter()
            .flat_map(|w| acts.iter().map(move |a| (w.clone(), a.clone())))
            .collect();
        product_of_sections &= pairs == product;
        feasible_equals_action_set &= ws.iter().all(|w| f.at(w) == &acts);
        let first = f.at(ws.first().unwrap());
        feasible_constant &= ws.iter().all(|w| f.at(w) == first);
        action_sets.insert(j, acts);
    }
    Ok(FeasibilityEquivalence {
        rectangular: check_axiom(q, AxiomId::Pwa).is_ok(),
        product_of_sections,
        feasible_equals_action_set,
        feasible_constant,
        action_sets,
    })
}

/// ⟨Y_j⟩: successor nodes reached from each situation.
pub fn successor_sets(q: &QuintupleSet) -> BTreeMap<Value, BTreeSet<Atom>> {
    q.slice_partition()
        .into_iter()
        .map(|(j, s)| (j, s.successors()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn atoms(xs: &[&str]) -> BTreeSet<Atom> {
        xs.iter().map(|x| Atom::new(*x).unwrap()).collect()
    }

    fn single(i: &str, j: &str, w: &str, a: &str, y: &str) -> QuintupleSet {
        [Quintuple::parse(i, j, w, a, y).unwrap()].into_iter().collect()
    }

    #[test]
    fn axiom_codes_round_trip() {
        for a in AxiomId::ALL {
            assert_eq!(a.code().parse::<AxiomId>().unwrap(), a);
            assert_eq!(a.label().parse::<AxiomId>().unwrap(), a);
        }
        assert!("P_X".parse::<AxiomId>().is_err());
    }

    #[test]
    fn table_rows_fail_exactly_their_axiom() {
        for (axiom, q) in fixtures::table_c1() {
            let report = validate(&q);
            assert_eq!(report.failing(), vec![axiom], "row for {axiom}:\n{report}");
        }
    }

    #[test]
    fn player_witness_names_both_players() {
        let (_, q) = &fixtures::table_c1()[0];
        let v = check_axiom(q, AxiomId::PiJ).unwrap_err();
        let players: BTreeSet<String> = v.rows.iter().map(|r| r.i.to_string()).collect();
        assert_eq!(players, ["Ann".to_string(), "Bob".to_string()].into());
        assert!(v.rows.iter().all(|r| r.j.to_string() == "now"));
    }

    #[test]
    fn cycle_witness() {
        let (_, q) = &fixtures::table_c1()[6];
        let v = check_axiom(q, AxiomId::Py).unwrap_err();
        assert_eq!(v.nodes, atoms(&["2", "3"]));
        assert_eq!(v.rows.len(), 2);
    }

    #[test]
    fn root_witness() {
        let v = check_axiom(&fixtures::two_rows(), AxiomId::Pr).unwrap_err();
        assert_eq!(v.nodes, atoms(&["43", "48"]));
    }

    #[test]
    fn witnesses_reproduce_their_violation() {
        let mut cases: Vec<QuintupleSet> = fixtures::table_c1().into_iter().map(|(_, q)| q).collect();
        cases.push(fixtures::two_rows());
        for q in cases {
            for v in validate(&q).violations() {
                if v.axiom == AxiomId::Pr {
                    continue;
                }
                let w = v.witness_set();
                assert!(w.is_subset(&q));
                assert!(check_axiom(&w, v.axiom).is_err(), "{v}");
            }
        }
    }

    #[test]
    fn worked_examples_are_pentaforms() {
        for q in [fixtures::alex(), fixtures::horse(), fixtures::horse_named()] {
            for a in AxiomId::ALL {
                assert!(check_axiom(&q, a).is_ok(), "{a}");
            }
            assert!(validate(&q).is_pentaform());
        }
        let report = validate(&fixtures::two_rows());
        assert_eq!(report.failing(), vec![AxiomId::Pr]);
        assert!(report.is_block());
    }

    #[test]
    fn small_relations() {
        let empty = validate(&QuintupleSet::new());
        assert!(!empty.is_pentaform());
        assert!(empty.is_block());
        assert_eq!(empty.failing(), vec![AxiomId::Pr]);

        assert!(validate(&single("i", "j", "w", "a", "y")).is_pentaform());

        let looped = validate(&single("i", "j", "w", "a", "w"));
        assert_eq!(looped.failing(), vec![AxiomId::Py, AxiomId::Pr]);
    }

    #[test]
    fn path_based_set_source_check() {
        // p is not a function, yet both successors are reachable from 0.
        let (_, q) = &fixtures::table_c1()[4];
        assert!(q.predecessor_map().is_none());
        assert!(check_axiom(q, AxiomId::Py).is_ok());
        // Not reachable: 5 only hangs off the 4 ↔ 5 cycle.
        let q: QuintupleSet = [
            Quintuple::parse("i", "j", "0", "a", "1").unwrap(),
            Quintuple::parse("i", "j", "0", "b", "9").unwrap(),
            Quintuple::parse("i", "k", "1", "a", "9").unwrap(),
            Quintuple::parse("i", "k", "4", "a", "5").unwrap(),
            Quintuple::parse("i", "k", "5", "a", "4").unwrap(),
        ]
        .into_iter()
        .collect();
        let v = check_axiom(&q, AxiomId::Py).unwrap_err();
        assert_eq!(v.nodes, atoms(&["4"]));
        assert!(check_axiom(&v.witness_set(), AxiomId::Py).is_err());
    }

    #[test]
    fn start_and_end_nodes() {
        let g = fixtures::guilty();
        assert_eq!(g.start_nodes(), atoms(&["4", "5"]));
        assert_eq!(g.end_nodes(), atoms(&["11", "12", "13", "14"]));
        assert_eq!(fixtures::horse_named().start_nodes(), atoms(&["0"]));
        assert!(QuintupleSet::new().end_nodes().is_empty());
    }

    #[test]
    fn situation_equivalence() {
        let e = pjw_equivalence(&fixtures::horse_named());
        assert!(e.functional && e.disjoint && e.indexed_partition);
        let sets: BTreeSet<BTreeSet<Atom>> = e.info_sets.values().cloned().collect();
        assert_eq!(sets, [atoms(&["0"]), atoms(&["1"]), atoms(&["2", "3"])].into());

        let (_, row2) = &fixtures::table_c1()[1];
        let e = pjw_equivalence(row2);
        assert!(!e.functional && !e.disjoint && !e.indexed_partition);

        let e = pjw_equivalence(&QuintupleSet::new());
        assert!(e.functional && e.disjoint && e.indexed_partition);
    }

    #[test]
    fn feasibility_equivalence() {
        let e = pwa_equivalence(&fixtures::horse()).unwrap();
        assert!(e.rectangular && e.product_of_sections && e.feasible_equals_action_set && e.feasible_constant);
        assert_eq!(e.action_sets[&"{2,3}".parse::<Value>().unwrap()], atoms(&["e", "f"]));

        let (_, row3) = &fixtures::table_c1()[2];
        let e = pwa_equivalence(row3).unwrap();
        assert!(!e.rectangular && !e.product_of_sections && !e.feasible_equals_action_set && !e.feasible_constant);

        assert!(pwa_equivalence(&single("i", "j", "w", "a", "y")).unwrap().agree());

        let (_, row2) = &fixtures::table_c1()[1];
        assert_eq!(pwa_equivalence(row2), Err(AxiomError::Precondition(AxiomId::PjW)));
    }

    #[test]
    fn exit_steps_on_the_horse() {
        let steps = successor_exit_steps(&fixtures::horse_named()).unwrap();
        assert_eq!(steps[&Atom::new("1").unwrap()], 1);
        assert_eq!(steps[&Atom::new("7").unwrap()], 3);
        assert_eq!(steps.len(), 8);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_set() -> impl Strategy<Value = QuintupleSet> {
            let s = || prop::sample::select(vec!["0", "1", "2", "3"]);
            prop::collection::vec((s(), s(), s(), s(), s()), 0..10).prop_map(|v| {
                v.into_iter()
                    .map(|(i, j, w, a, y)| Quintuple::parse(i, j, w, a, y).unwrap())
                    .collect()
            })
        }

        proptest! {
            #[test]
            fn equivalent_forms_agree(q in arb_set()) {
                prop_assert!(pjw_equivalence(&q).agree());
                if let Ok(e) = pwa_equivalence(&q) {
                    prop_assert!(e.agree());
                }
            }

            #[test]
            fn report_flags_follow_outcomes(q in arb_set()) {
                let r = validate(&q);
                prop_assert_eq!(r.is_pentaform(), r.failing().is_empty());
                prop_assert_eq!(r.is_block(), r.failing().iter().all(|a| *a == AxiomId::Pr));
                prop_assert_eq!(r.is_pentaform(), is_pentaform(&q));
            }

            #[test]
            fn witnesses_are_reproducible(q in arb_set()) {
                for v in validate(&q).violations().filter(|v| v.axiom != AxiomId::Pr) {
                    prop_assert!(v.witness_set().is_subset(&q));
                    prop_assert!(check_axiom(&v.witness_set(), v.axiom).is_err());
                }
            }

            #[test]
            fn exit_steps_are_bounded(q in arb_set()) {
                if let Some(steps) = successor_exit_steps(&q) {
                    let bound = q.successors().len();
                    prop_assert!(steps.values().all(|m| *m >= 1 && *m <= bound));
                    prop_assert_eq!(check_axiom(&q, AxiomId::Py).is_ok(), steps.len() == bound);
                }
            }

            #[test]
            fn successor_sets_partition_y(q in arb_set()) {
                if check_axiom(&q, AxiomId::PjW).is_ok() && check_axiom(&q, AxiomId::PwY).is_ok() {
                    let ys = successor_sets(&q);
                    let sets: Vec<_> = ys.values().collect();
                    for (k, a) in sets.iter().enumerate() {
                        prop_assert!(!a.is_empty());
                        for b in &sets[k + 1..] {
                            prop_assert!(a.is_disjoint(b));
                        }
                    }
                    let union: BTreeSet<Atom> = sets.iter().flat_map(|s| s.iter().cloned()).collect();
                    prop_assert_eq!(union, q.successors());
                }
            }
        }
    }
}
