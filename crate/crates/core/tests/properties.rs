//! Randomized laws, driven by proptest-chosen seeds.

mod common;

use common::checks;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn run(check: fn(&mut ChaCha8Rng) -> Result<(), String>, seed: u64) -> Result<(), TestCaseError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    check(&mut rng).map_err(|m| TestCaseError::fail(format!("seed {seed}: {m}")))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn subset_closure(seed in any::<u64>()) { run(checks::subset_closure, seed)?; }

    #[test]
    fn slice_unions(seed in any::<u64>()) { run(checks::slice_unions, seed)?; }

    #[test]
    fn tree_round_trips(seed in any::<u64>()) { run(checks::tree_round_trips, seed)?; }

    #[test]
    fn recall(seed in any::<u64>()) { run(checks::recall, seed)?; }

    #[test]
    fn subroots(seed in any::<u64>()) { run(checks::subroots, seed)?; }

    #[test]
    fn root_reachability(seed in any::<u64>()) { run(checks::root_reachability, seed)?; }

    #[test]
    fn image_validity(seed in any::<u64>()) { run(checks::image_validity, seed)?; }

    #[test]
    fn union_formulas(seed in any::<u64>()) { run(checks::union_formulas, seed)?; }

    #[test]
    fn serialization(seed in any::<u64>()) { run(checks::serialization, seed)?; }
}

#[test]
fn generators_produce_pentaforms() {
    let mut rng = common::rng("generators");
    for _ in 0..200 {
        let q = common::random_pentaform(&mut rng, 32);
        assert!(pentaform::axioms::is_pentaform(&q), "{q:?}");
    }
}

#[test]
fn generators_cover_both_recall_outcomes() {
    let mut rng = common::rng("coverage");
    let (mut pass, mut fail) = (0, 0);
    for _ in 0..300 {
        let q = common::random_pentaform(&mut rng, 16);
        match pentaform::analysis::check_perfect_recall(&q).unwrap() {
            None => pass += 1,
            Some(_) => fail += 1,
        }
    }
    assert!(pass > 30 && fail > 30, "pass {pass}, fail {fail}");
}
