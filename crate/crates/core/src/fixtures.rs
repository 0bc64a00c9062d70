//! The worked examples: the one-decision Alex game, Selten's horse (with
//! information-set situations and with named situations), the two-row
//! non-pentaform, the axiom-independence table and the guilty/innocent
//! continuation blocks.

use std::collections::{BTreeMap, BTreeSet};

use crate::axioms::AxiomId;
use crate::game::{ExtendedReal, RawGmGame, UtilityProfile};
use crate::relation::{Quintuple, QuintupleSet};
use crate::value::{Atom, Value};

fn rows(table: &[[&str; 5]]) -> QuintupleSet {
    table
        .iter()
        .map(|[i, j, w, a, y]| Quintuple::parse(i, j, w, a, y).expect("fixture rows are well formed"))
        .collect()
}

fn atom(s: &str) -> Atom {
    Atom::new(s).expect("fixture atoms are nonempty")
}

fn run(nodes: &[&str]) -> BTreeSet<Atom> {
    nodes.iter().map(|n| atom(n)).collect()
}

/// One player, one decision at node 0 between `left` and `right`.
pub fn alex() -> QuintupleSet {
    rows(&[
        ["Alex", "{0}", "0", "left", "1"],
        ["Alex", "{0}", "0", "right", "2"],
    ])
}

/// Selten's horse with information-set situations `{0}`, `{1}`, `{2,3}`.
pub fn horse() -> QuintupleSet {
    rows(&[
        ["Kid", "{0}", "0", "c", "1"],
        ["Kid", "{0}", "0", "b", "2"],
        ["Dog", "{1}", "1", "g", "8"],
        ["Dog", "{1}", "1", "d", "3"],
        ["Teacher", "{2,3}", "2", "e", "4"],
        ["Teacher", "{2,3}", "2", "f", "5"],
        ["Teacher", "{2,3}", "3", "e", "6"],
        ["Teacher", "{2,3}", "3", "f", "7"],
    ])
}

/// Selten's horse with situations named `today`, `tonight`, `tomorrow`.
pub fn horse_named() -> QuintupleSet {
    rows(&[
        ["Kid", "today", "0", "c", "1"],
        ["Kid", "today", "0", "b", "2"],
        ["Dog", "tonight", "1", "g", "8"],
        ["Dog", "tonight", "1", "d", "3"],
        ["Teacher", "tomorrow", "2", "e", "4"],
        ["Teacher", "tomorrow", "2", "f", "5"],
        ["Teacher", "tomorrow", "3", "e", "6"],
        ["Teacher", "tomorrow", "3", "f", "7"],
    ])
}

/// [`horse_named`] with Kid and Teacher merged into one player.
pub fn kid_teacher() -> QuintupleSet {
    horse_named()
        .into_iter()
        .map(|mut r| {
            if matches!(r.i.as_atom().map(Atom::as_str), Some("Kid" | "Teacher")) {
                r.i = Value::Atom(atom("KidTeacher"));
            }
            r
        })
        .collect()
}

/// Two unrelated rows: satisfies every axiom except the unique-root one.
pub fn two_rows() -> QuintupleSet {
    rows(&[["41", "42", "43", "44", "45"], ["46", "47", "48", "49", "50"]])
}

/// Eight relations, each violating exactly the paired axiom.
pub fn table_c1() -> Vec<(AxiomId, QuintupleSet)> {
    vec![
        (AxiomId::PiJ, rows(&[["Ann", "now", "0", "b", "1"], ["Bob", "now", "0", "b", "1"]])),
        (AxiomId::PjW, rows(&[["Ann", "now", "0", "b", "1"], ["Ann", "later", "0", "b", "1"]])),
        (
            AxiomId::Pwa,
            rows(&[
                ["Ann", "now", "0", "b", "1"],
                ["Ann", "now", "0", "c", "2"],
                ["Ann", "now", "1", "b", "3"],
            ]),
        ),
        (AxiomId::PwaY, rows(&[["Ann", "now", "0", "b", "1"], ["Ann", "now", "0", "b", "2"]])),
        (AxiomId::PwY, rows(&[["Ann", "now", "0", "b", "1"], ["Ann", "now", "1", "b", "1"]])),
        (AxiomId::PaY, rows(&[["Ann", "now", "0", "b", "1"], ["Ann", "now", "0", "c", "1"]])),
        (
            AxiomId::Py,
            rows(&[
                ["Ann", "now", "0", "b", "1"],
                ["Ann", "now", "2", "b", "3"],
                ["Ann", "now", "3", "b", "2"],
            ]),
        ),
        (AxiomId::Pr, rows(&[["Ann", "now", "0", "b", "1"], ["Ann", "now", "2", "b", "3"]])),
    ]
}

/// Continuation block rooted at the horse's end nodes 4 and 5.
pub fn guilty() -> QuintupleSet {
    rows(&[
        ["Kid", "guilty", "4", "s", "11"],
        ["Kid", "guilty", "4", "~s", "12"],
        ["Kid", "guilty", "5", "s", "13"],
        ["Kid", "guilty", "5", "~s", "14"],
    ])
}

/// Continuation block rooted at the horse's end nodes 6 and 7.
pub fn innocent() -> QuintupleSet {
    rows(&[
        ["Kid", "innocent", "6", "s", "15"],
        ["Kid", "innocent", "6", "~s", "16"],
        ["Kid", "innocent", "7", "s", "17"],
        ["Kid", "innocent", "7", "~s", "18"],
    ])
}

/// Alex's payoffs: 2 after `left`, 4 after `right`.
pub fn alex_utility() -> UtilityProfile {
    let mut u = UtilityProfile::new();
    u.set(Value::Atom(atom("Alex")), run(&["0", "1"]), ExtendedReal::Finite(2.0));
    u.set(Value::Atom(atom("Alex")), run(&["0", "2"]), ExtendedReal::Finite(4.0));
    u
}

/// Payoffs for the horse, ordered (Kid, Dog, Teacher) per run.
pub fn horse_utility() -> UtilityProfile {
    let table: [(&[&str], [f64; 3]); 5] = [
        (&["0", "1", "8"], [1.0, 1.0, 1.0]),
        (&["0", "2", "4"], [3.0, 2.0, 2.0]),
        (&["0", "2", "5"], [0.0, 0.0, 0.0]),
        (&["0", "1", "3", "6"], [4.0, 4.0, 0.0]),
        (&["0", "1", "3", "7"], [1.0, 1.0, 1.0]),
    ];
    let mut u = UtilityProfile::new();
    for (nodes, payoffs) in table {
        for (player, x) in ["Kid", "Dog", "Teacher"].into_iter().zip(payoffs) {
            u.set(Value::Atom(atom(player)), run(nodes), ExtendedReal::Finite(x));
        }
    }
    u
}

/// The Alex game in tree-adorned form.
pub fn alex_gm() -> RawGmGame {
    RawGmGame {
        nodes: run(&["0", "1", "2"]),
        edges: [(atom("0"), atom("1")), (atom("0"), atom("2"))].into(),
        info_sets: [run(&["0"])].into(),
        labels: BTreeMap::from([
            ((atom("0"), atom("1")), atom("left")),
            ((atom("0"), atom("2")), atom("right")),
        ]),
        control: BTreeMap::from([(atom("0"), Value::Atom(atom("Alex")))]),
        utility: alex_utility(),
    }
}

/// The horse in tree-adorned form.
pub fn horse_gm() -> RawGmGame {
    let edges = [
        ("0", "1", "c"),
        ("0", "2", "b"),
        ("1", "8", "g"),
        ("1", "3", "d"),
        ("2", "4", "e"),
        ("2", "5", "f"),
        ("3", "6", "e"),
        ("3", "7", "f"),
    ];
    RawGmGame {
        nodes: (0..=8).map(|k| atom(&k.to_string())).collect(),
        edges: edges.iter().map(|(w, y, _)| (atom(w), atom(y))).collect(),
        info_sets: [run(&["0"]), run(&["1"]), run(&["2", "3"])].into(),
        labels: edges
            .iter()
            .map(|(w, y, a)| ((atom(w), atom(y)), atom(a)))
            .collect(),
        control: [("0", "Kid"), ("1", "Dog"), ("2", "Teacher"), ("3", "Teacher")]
            .iter()
            .map(|(w, i)| (atom(w), Value::Atom(atom(i))))
            .collect(),
        utility: horse_utility(),
    }
}
