//! Random pentaforms, games and trees, plus brute-force oracles.
//!
//! Generators take a `ChaCha8Rng`; `rng(tag)` seeds one from
//! `PENTAFORM_SEED` (default 2024) mixed with the suite tag.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use pentaform::analysis;
use pentaform::game::{ExtendedReal, RawGmGame, UtilityProfile};
use pentaform::relation::{Quintuple, QuintupleSet};
use pentaform::tree::{Edge, OutTree, RootedTree, Run};
use pentaform::value::{Atom, Value};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn seed() -> u64 {
    std::env::var("PENTAFORM_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(2024)
}

pub fn cases() -> usize {
    std::env::var("PENTAFORM_CASES").ok().and_then(|s| s.parse().ok()).unwrap_or(1000)
}

pub fn rng(tag: &str) -> ChaCha8Rng {
    let mix = tag.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    ChaCha8Rng::seed_from_u64(seed() ^ mix)
}

pub fn atom(s: &str) -> Atom {
    Atom::new(s).unwrap()
}

/// A random tree on `n` nodes with shuffled numeric names, as (names, parent
/// index per non-root node). Index 0 is the root.
pub struct Skeleton {
    pub names: Vec<Atom>,
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
}

impl Skeleton {
    pub fn random(rng: &mut ChaCha8Rng, n: usize) -> Self {
        let mut labels: Vec<usize> = (0..n).collect();
        labels.shuffle(rng);
        let names = labels.iter().map(|k| atom(&k.to_string())).collect();
        let mut parent = vec![None];
        let mut children = vec![Vec::new(); n];
        for k in 1..n {
            // bias towards recent nodes so deep trees occur
            let lo = k.saturating_sub(rng.gen_range(1..=k));
            let p = rng.gen_range(lo..k);
            parent.push(Some(p));
            children[p].push(k);
        }
        Skeleton { names, parent, children }
    }

    pub fn edges(&self) -> BTreeSet<Edge> {
        self.parent
            .iter()
            .enumerate()
            .filter_map(|(c, p)| p.map(|p| (self.names[p].clone(), self.names[c].clone())))
            .collect()
    }

    pub fn nodes(&self) -> BTreeSet<Atom> {
        self.names.iter().cloned().collect()
    }

    pub fn decision_nodes(&self) -> Vec<usize> {
        (0..self.names.len()).filter(|&k| !self.children[k].is_empty()).collect()
    }

    /// Partitions the decision nodes into groups of equal out-degree.
    pub fn random_info_sets(&self, rng: &mut ChaCha8Rng, perfect: bool) -> Vec<Vec<usize>> {
        let mut by_degree: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for w in self.decision_nodes() {
            by_degree.entry(self.children[w].len()).or_default().push(w);
        }
        let mut out = Vec::new();
        for (_, group) in by_degree {
            if perfect {
                out.extend(group.into_iter().map(|w| vec![w]));
                continue;
            }
            let parts = rng.gen_range(1..=group.len());
            let mut cells = vec![Vec::new(); parts];
            for w in group {
                cells[rng.gen_range(0..parts)].push(w);
            }
            out.extend(cells.into_iter().filter(|c| !c.is_empty()));
        }
        out
    }
}

/// Players, actions and labels for a skeleton with information sets.
pub struct Adornment {
    pub info_sets: Vec<Vec<usize>>,
    pub player: Vec<Value>,
    /// Action on the edge into each non-root node.
    pub action: BTreeMap<usize, Atom>,
}

impl Adornment {
    pub fn random(rng: &mut ChaCha8Rng, sk: &Skeleton) -> Self {
        let perfect = rng.gen_ratio(1, 3);
        let info_sets = sk.random_info_sets(rng, perfect);
        let players = rng.gen_range(1..=3);
        let mut player = Vec::new();
        let mut action = BTreeMap::new();
        for (k, h) in info_sets.iter().enumerate() {
            player.push(Value::atom(format!("p{}", rng.gen_range(0..players))).unwrap());
            let d = sk.children[h[0]].len();
            let shared = rng.gen_bool(0.5);
            let names: Vec<Atom> = (0..d)
                .map(|m| if shared { atom(&format!("a{m}")) } else { atom(&format!("s{k}a{m}")) })
                .collect();
            for &w in h {
                let mut names = names.clone();
                names.shuffle(rng);
                for (&c, a) in sk.children[w].iter().zip(names) {
                    action.insert(c, a);
                }
            }
        }
        Adornment { info_sets, player, action }
    }
}

/// A random pentaform on 2..=max_nodes nodes.
pub fn random_pentaform(rng: &mut ChaCha8Rng, max_nodes: usize) -> QuintupleSet {
    let n = rng.gen_range(2..=max_nodes);
    let sk = Skeleton::random(rng, n);
    let ad = Adornment::random(rng, &sk);
    let info_valued = rng.gen_bool(0.5);
    let mut q = QuintupleSet::new();
    for (k, h) in ad.info_sets.iter().enumerate() {
        let j = if info_valued {
            Value::Set(h.iter().map(|&w| sk.names[w].clone()).collect())
        } else {
            Value::atom(format!("j{k}")).unwrap()
        };
        for &w in h {
            for &c in &sk.children[w] {
                q.insert(Quintuple::new(
                    ad.player[k].clone(),
                    j.clone(),
                    sk.names[w].clone(),
                    ad.action[&c].clone(),
                    sk.names[c].clone(),
                ));
            }
        }
    }
    q
}

pub fn random_value(rng: &mut ChaCha8Rng) -> ExtendedReal {
    match rng.gen_range(0..20) {
        0 => ExtendedReal::NegInf,
        1 => ExtendedReal::PosInf,
        _ => ExtendedReal::Finite(rng.gen_range(-10..=10) as f64),
    }
}

pub fn random_utility(rng: &mut ChaCha8Rng, players: &BTreeSet<Value>, runs: &BTreeSet<Run>) -> UtilityProfile {
    let mut u = UtilityProfile::new();
    for i in players {
        for z in runs {
            u.set(i.clone(), z.clone(), random_value(rng));
        }
    }
    u
}

/// A random Gm game on 2..=max_nodes nodes, built directly from its components.
pub fn random_gm(rng: &mut ChaCha8Rng, max_nodes: usize) -> RawGmGame {
    let n = rng.gen_range(2..=max_nodes);
    let sk = Skeleton::random(rng, n);
    let ad = Adornment::random(rng, &sk);
    let nodes = sk.nodes();
    let edges = sk.edges();
    let tree = OutTree::new(nodes.clone(), edges.clone()).unwrap();
    let mut control = BTreeMap::new();
    for (k, h) in ad.info_sets.iter().enumerate() {
        for &w in h {
            control.insert(sk.names[w].clone(), ad.player[k].clone());
        }
    }
    let labels = ad
        .action
        .iter()
        .map(|(&c, a)| ((sk.names[sk.parent[c].unwrap()].clone(), sk.names[c].clone()), a.clone()))
        .collect();
    let players: BTreeSet<Value> = control.values().cloned().collect();
    let utility = random_utility(rng, &players, &tree.runs());
    RawGmGame {
        nodes,
        edges,
        info_sets: ad
            .info_sets
            .iter()
            .map(|h| h.iter().map(|&w| sk.names[w].clone()).collect())
            .collect(),
        labels,
        control,
        utility,
    }
}

/// A random rooted tree: random undirected edges, random root.
pub fn random_rooted_tree(rng: &mut ChaCha8Rng, max_nodes: usize) -> RootedTree {
    let n = rng.gen_range(1..=max_nodes);
    let sk = Skeleton::random(rng, n);
    let edges: Vec<Edge> = sk
        .edges()
        .into_iter()
        .map(|(a, b)| if rng.gen_bool(0.5) { (a, b) } else { (b, a) })
        .collect();
    let root = sk.names[rng.gen_range(0..n)].clone();
    RootedTree::new(sk.nodes(), edges, root).unwrap()
}

/// Random subset of the rows, each kept with probability one half.
pub fn random_subset(rng: &mut ChaCha8Rng, q: &QuintupleSet) -> QuintupleSet {
    q.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect()
}

/// Strict predecessors of `x` by walking the edge rows upward.
pub fn ancestors(q: &QuintupleSet, x: &Atom) -> Vec<Atom> {
    let parent: BTreeMap<&Atom, &Atom> = q.iter().map(|r| (&r.y, &r.w)).collect();
    let mut out = Vec::new();
    let mut cur = x;
    while let Some(&p) = parent.get(cur) {
        out.push(p.clone());
        cur = p;
        assert!(out.len() <= q.len(), "cycle above {x}");
    }
    out
}

/// Every perfect-recall violation, by direct quantification over Y³ and Y.
pub fn naive_recall_violations(q: &QuintupleSet) -> BTreeSet<(Atom, Atom, Atom)> {
    let row: BTreeMap<&Atom, &Quintuple> = q.iter().map(|r| (&r.y, r)).collect();
    let precedes = |a: &Atom, b: &Atom| ancestors(q, b).contains(a);
    let mut out = BTreeSet::new();
    for (&y1, r1) in &row {
        for (&y2, r2) in &row {
            if !(precedes(y1, y2) && r1.i == r2.i) {
                continue;
            }
            for (&y3, r3) in &row {
                if r2.j != r3.j {
                    continue;
                }
                let ok = row.iter().any(|(&y4, r4)| precedes(y4, y3) && r4.j == r1.j && r4.a == r1.a);
                if !ok {
                    out.insert((y1.clone(), y2.clone(), y3.clone()));
                }
            }
        }
    }
    out
}

pub fn naive_absentminded(q: &QuintupleSet) -> BTreeSet<(Atom, Atom)> {
    let row: BTreeMap<&Atom, &Quintuple> = q.iter().map(|r| (&r.y, r)).collect();
    let mut out = BTreeSet::new();
    for (&y2, r2) in &row {
        for y1 in ancestors(q, y2) {
            if let Some(r1) = row.get(&y1) {
                if r1.j == r2.j {
                    out.insert((y1.clone(), y2.clone()));
                }
            }
        }
    }
    out
}

/// Whether ᵗQ equals the union of the slices it touches.
pub fn is_union_of_slices(q: &QuintupleSet, t: &Atom) -> bool {
    let after = analysis::weakly_after(q, t).unwrap();
    let union: QuintupleSet = after.situations().iter().flat_map(|j| q.slice(j)).collect();
    union == after
}

/// The fixture files under `crates/core/fixtures`, keyed by file name.
pub fn corpus() -> Vec<(String, pentaform::io::Document)> {
    use pentaform::fixtures as fx;
    use pentaform::io::Document;
    let mut out = vec![
        ("alex.json".to_string(), Document::QuintupleSet(fx::alex())),
        ("horse.json".into(), Document::QuintupleSet(fx::horse())),
        ("horse_named.json".into(), Document::QuintupleSet(fx::horse_named())),
        ("kid_teacher.json".into(), Document::QuintupleSet(fx::kid_teacher())),
        ("two_rows.json".into(), Document::QuintupleSet(fx::two_rows())),
        ("guilty.json".into(), Document::QuintupleSet(fx::guilty())),
        ("innocent.json".into(), Document::QuintupleSet(fx::innocent())),
        ("alex_game.json".into(), Document::PentaformGame { rows: fx::alex(), utility: fx::alex_utility() }),
        ("horse_game.json".into(), Document::PentaformGame { rows: fx::horse(), utility: fx::horse_utility() }),
        (
            "horse_named_game.json".into(),
            Document::PentaformGame { rows: fx::horse_named(), utility: fx::horse_utility() },
        ),
        ("alex_gm.json".into(), Document::GmGame(fx::alex_gm())),
        ("horse_gm.json".into(), Document::GmGame(fx::horse_gm())),
    ];
    for (axiom, q) in fx::table_c1() {
        out.push((format!("independence_{}.json", axiom.code().to_lowercase()), Document::QuintupleSet(q)));
    }
    out
}

pub fn fixture_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

pub mod checks {
    //! One randomized case per call; `Err` carries a reproducible description.

    use super::*;
    use pentaform::analysis::{self, CompositionError};
    use pentaform::axioms::{self, AxiomId};
    use pentaform::game::{self, PentaformGame, RoundTrip};
    use pentaform::io::{self, Document};
    use pentaform::tree::{self, orient_divergently, underlying_rooted, validate_edge_tree};

    fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
        if cond {
            Ok(())
        } else {
            Err(msg())
        }
    }

    /// Subsets keep the six hereditary axioms; pentaform iff [Pwa] and [Pr].
    pub fn subset_closure(rng: &mut ChaCha8Rng) -> Result<(), String> {
        let q = random_pentaform(rng, 24);
        let sub = random_subset(rng, &q);
        let report = axioms::validate(&sub);
        for ax in AxiomId::HEREDITARY {
            ensure(report.passes(ax), || format!("{ax:?} fails on subset {sub:?}"))?;
        }
        let expected = report.passes(AxiomId::Pwa) && report.passes(AxiomId::Pr);
        ensure(report.is_pentaform() == expected, || format!("pentaform status mismatch on {sub:?}"))
    }

    /// Unions of slices are blocks, and pentaforms iff [Pr] holds.
    pub fn slice_unions(rng: &mut ChaCha8Rng) -> Result<(), String> {
        let q = random_pentaform(rng, 24);
        let chosen: QuintupleSet = q
            .slice_partition()
            .into_values()
            .filter(|_| rng.gen_bool(0.5))
            .flatten()
            .collect();
        let report = axioms::validate(&chosen);
        ensure(report.is_block(), || format!("slice union is not a block: {report}"))?;
        ensure(report.is_pentaform() == report.passes(AxiomId::Pr), || format!("{report}"))
    }

    /// Rooted trees and out-trees; nontrivial out-trees and edge-trees.
    pub fn tree_round_trips(rng: &mut ChaCha8Rng) -> Result<(), String> {
        let t = random_rooted_tree(rng, 64);
        let o = orient_divergently(&t);
        ensure(underlying_rooted(&o) == t, || format!("rooted round trip fails on {t:?}"))?;
        ensure(o.root() == t.root(), || "root moved".into())?;
        ensure(o.edges().len() + 1 == o.nodes().len(), || "edge count".into())?;
        if o.is_trivial() {
            return ensure(validate_edge_tree(o.edges()).is_err(), || "empty edge set accepted".into());
        }
        let e = validate_edge_tree(o.edges()).map_err(|v| format!("{v} on {o:?}"))?;
        let back = e.into_out_tree();
        ensure(back == o, || format!("edge-tree round trip fails on {o:?}"))?;
        let rebuilt = tree::OutTree::new(o.nodes().clone(), o.edges().clone()).map_err(|e| e.to_string())?;
        ensure(rebuilt == o, || "OutTree::new disagrees with orientation".into())
    }

    /// Perfect recall implies no absentmindedness; both match brute force.
    pub fn recall(rng: &mut ChaCha8Rng) -> Result<(), String> {
        let q = random_pentaform(rng, 16);
        let all: BTreeSet<_> = analysis::perfect_recall_violations(&q)
            .unwrap()
            .into_iter()
            .map(|w| (w.y1, w.y2, w.y3))
            .collect();
        ensure(all == naive_recall_violations(&q), || format!("recall oracle mismatch on {q:?}"))?;
        let first = analysis::check_perfect_recall(&q).unwrap();
        let expected = all.iter().min_by_key(|(y1, y2, y3)| (y2.clone(), y1.clone(), y3.clone()));
        ensure(
            first.as_ref().map(|w| (&w.y1, &w.y2, &w.y3)) == expected.map(|(a, b, c)| (a, b, c)),
            || format!("witness order on {q:?}"),
        )?;
        let absent = analysis::check_no_absentmindedness(&q).unwrap();
        let naive = naive_absentminded(&q);
        ensure(absent.map(|w| (w.y1, w.y2)) == naive.iter().next().cloned(), || {
            format!("absentmindedness oracle mismatch on {q:?}")
        })?;
        ensure(!(first.is_none() && !naive.is_empty()), || format!("recall without absentmindedness fails on {q:?}"))
    }

    /// t ∈ T iff ᵗQ is a union of slices; subgames are pentaforms rooted at t.
    pub fn subroots(rng: &mut ChaCha8Rng) -> Result<(), String> {
        let q = random_pentaform(rng, 24);
        let t_set = analysis::subroots(&q).unwrap();
        let root = q.root().unwrap();
        ensure(t_set.contains(&root), || "root is not a subroot".into())?;
        for t in q.decision_nodes() {
            let oracle = is_union_of_slices(&q, &t);
            ensure(t_set.contains(&t) == oracle, || format!("subroot {t} mismatch on {q:?}"))?;
            match analysis::subgame(&q, &t) {
                Ok(sub) => {
                    ensure(axioms::is_pentaform(&sub), || format!("subgame at {t} is not a pentaform"))?;
                    ensure(sub.root().ok() == Some(t.clone()), || format!("subgame at {t} has the wrong root"))?;
                    for j in sub.situations() {
                        ensure(sub.slice(&j) == q.slice(&j), || format!("slice {j} differs in the subgame"))?;
                    }
                }
                Err(_) => ensure(!oracle, || format!("subgame rejected subroot {t}"))?,
            }
        }
        Ok(())
    }

    /// Every successor reaches the root by iterated predecessors.
    pub fn root_reachability(rng: &mut ChaCha8Rng) -> Result<(), String> {
        let q = random_pentaform(rng, 32);
        let root = q.root().unwrap();
        let p = q.predecessor_map().ok_or("predecessor is not a function")?;
        let ys = q.successors();
        for y in &ys {
            let mut x = y;
            let mut steps = 0;
            while let Some(w) = p.get(x) {
                x = w;
                steps += 1;
                if steps > ys.len() {
                    return Err(format!("{y} does not reach the root"));
                }
            }
            ensure(x == &root && steps >= 1, || format!("{y} ends at {x}, not the root {root}"))?;
        }
        Ok(())
    }

    /// P lands in pentaform games with information-set situations, S lands in
    /// Gm games, and the round trips behave.
    pub fn image_validity(rng: &mut ChaCha8Rng) -> Result<(), String> {
        let g = random_gm(rng, 32).validate().map_err(|v| format!("generated Gm game invalid: {v:?}"))?;
        let pg = game::pentaform_of(&g);
        ensure(game::has_information_set_situations(pg.relation()), || "P image lacks information-set situations".into())?;
        ensure(game::sp_roundtrip(&g).is_identity(), || format!("SP is not the identity on {g:?}"))?;
        ensure(game::gm_battery(&g).iter().all(|e| e.holds), || "equality battery fails".into())?;

        let q = random_pentaform(rng, 32);
        let tree = out_tree_of_checked(&q)?;
        let u = random_utility(rng, &q.players(), &tree.runs());
        let pg = PentaformGame::new(q.clone(), u).map_err(|e| e.to_string())?;
        let s = game::standardize(&pg);
        ensure(s.clone().into_raw().validate().is_ok(), || "S image invalid".into())?;
        match game::ps_roundtrip(&pg) {
            RoundTrip::Identity => ensure(game::has_information_set_situations(&q), || "PS identity without information-set situations".into()),
            RoundTrip::Rewritten(image) => {
                ensure(!game::has_information_set_situations(&q), || "PS rewrote a fixed point".into())?;
                ensure(game::ps_roundtrip(&image).is_identity(), || "PS is not idempotent".into())
            }
            RoundTrip::Mismatch(c) => Err(format!("PS mismatch in {c:?}")),
        }
    }

    fn out_tree_of_checked(q: &QuintupleSet) -> Result<tree::OutTree, String> {
        tree::out_tree_of(q).map_err(|e| e.to_string())
    }

    /// Splitting a pentaform by situations and recombining.
    pub fn union_formulas(rng: &mut ChaCha8Rng) -> Result<(), String> {
        let q = random_pentaform(rng, 24);
        let (mut q1, mut q2) = (QuintupleSet::new(), QuintupleSet::new());
        for (_, slice) in q.slice_partition() {
            if rng.gen_bool(0.5) { q1.extend(slice) } else { q2.extend(slice) }
        }
        match analysis::union_pair(&q1, &q2) {
            Ok(u) => {
                ensure(u.union == q, || "union lost rows".into())?;
                ensure(u.start_nodes == q.start_nodes() && u.end_nodes == q.end_nodes(), || "start/end".into())
            }
            Err(CompositionError::StartEndClash(_)) => {
                let clash = q1.start_nodes().intersection(&q2.end_nodes()).count();
                ensure(clash > 0, || "spurious clash".into())
            }
            Err(e) => Err(format!("{e} on {q1:?} / {q2:?}")),
        }
    }

    /// Random documents survive serialization byte for byte.
    pub fn serialization(rng: &mut ChaCha8Rng) -> Result<(), String> {
        let q = random_pentaform(rng, 16);
        let tree = out_tree_of_checked(&q)?;
        let u = random_utility(rng, &q.players(), &tree.runs());
        let gm = random_gm(rng, 16);
        for doc in [Document::QuintupleSet(q.clone()), Document::PentaformGame { rows: q, utility: u }, Document::GmGame(gm)] {
            let text = io::serialize(&doc);
            let back = io::parse(&text).map_err(|e| e.to_string())?;
            ensure(back.document == doc, || format!("round trip changed {}", doc.kind()))?;
            ensure(io::serialize(&back.document) == text, || "bytes changed".into())?;
        }
        Ok(())
    }
}
