use proptest::prelude::*;

use captl_core::captl::{parse_requirement, validate_persistence};
use captl_core::casestudy::random::{random_mdp, random_persistence_requirement, RandomMdpParams};
use captl_core::mdp::{parse_model, serialize_model, StateSet};
use captl_core::oracle::{collapse, stutter_equivalent};
use captl_core::pctl::{
    eval_state_formula, max_reach_values, min_reach_values, persistence_values, solve_objective, Direction, PathFormula, SolveOptions,
    StateFormula,
};
use captl_core::synthesis::{partition_states, synth_persistence, Tag};

fn params(states: usize, actions: usize) -> RandomMdpParams {
    RandomMdpParams { states, max_actions: actions, ..RandomMdpParams::default() }
}

fn props() -> Vec<String> {
    vec!["b0".into(), "b1".into(), "b2".into()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn values_are_probabilities(seed in any::<u64>(), n in 1usize..25, k in 1usize..4) {
        let m = random_mdp(seed, &params(n, k));
        let t = eval_state_formula(&m, &StateFormula::atom("b0")).unwrap().states;
        let o = SolveOptions::default();
        for x in [max_reach_values(&m, &t, &o).unwrap(), min_reach_values(&m, &t, &o).unwrap(), persistence_values(&m, &t, &o).unwrap()] {
            for s in x.domain().iter() {
                prop_assert!((0.0..=1.0).contains(&x.at(s)));
            }
        }
    }

    #[test]
    fn max_dominates_min(seed in any::<u64>(), n in 1usize..25) {
        let m = random_mdp(seed, &params(n, 3));
        let o = SolveOptions::default();
        for path in [PathFormula::Eventually(StateFormula::atom("b1")), PathFormula::EventuallyAlways(StateFormula::atom("b1"))] {
            let hi = solve_objective(&m, 0, Direction::Max, &path, &o).unwrap().values;
            let lo = solve_objective(&m, 0, Direction::Min, &path, &o).unwrap().values;
            for s in hi.domain().iter() {
                prop_assert!(hi.at(s) >= lo.at(s) - o.epsilon, "state {}: {} < {}", s, hi.at(s), lo.at(s));
            }
        }
    }

    #[test]
    fn reach_values_are_monotone_in_target(seed in any::<u64>(), n in 1usize..20) {
        let m = random_mdp(seed, &params(n, 2));
        let small = eval_state_formula(&m, &StateFormula::atom("b0")).unwrap().states;
        let big = eval_state_formula(&m, &StateFormula::or(StateFormula::atom("b0"), StateFormula::atom("b2"))).unwrap().states;
        let o = SolveOptions::default();
        let a = max_reach_values(&m, &small, &o).unwrap();
        let b = max_reach_values(&m, &big, &o).unwrap();
        for s in a.domain().iter() {
            prop_assert!(b.at(s) >= a.at(s) - 1e-9);
        }
    }

    #[test]
    fn stutter_equivalence_is_an_equivalence(a in prop::collection::vec(0u8..3, 0..10), b in prop::collection::vec(0u8..3, 0..10), c in prop::collection::vec(0u8..3, 0..10)) {
        prop_assert!(stutter_equivalent(&a, &a));
        prop_assert_eq!(stutter_equivalent(&a, &b), stutter_equivalent(&b, &a));
        if stutter_equivalent(&a, &b) && stutter_equivalent(&b, &c) {
            prop_assert!(stutter_equivalent(&a, &c));
        }
        prop_assert_eq!(collapse(&collapse(&a)), collapse(&a));
    }

    #[test]
    fn doubling_letters_keeps_traces_equivalent(a in prop::collection::vec(0u8..3, 1..10), i in 0usize..10) {
        let mut b = a.clone();
        let i = i % a.len();
        b.insert(i, a[i]);
        prop_assert!(stutter_equivalent(&a, &b));
    }

    #[test]
    fn requirements_round_trip(seed in any::<u64>(), k in 1usize..5) {
        let text = random_persistence_requirement(seed, &props(), k);
        let req = parse_requirement(&text).unwrap();
        let again = parse_requirement(&req.to_string()).unwrap();
        prop_assert_eq!(&req, &again);
        prop_assert!(validate_persistence(&again).is_empty());
    }

    #[test]
    fn models_round_trip(seed in any::<u64>(), n in 1usize..30) {
        let m = random_mdp(seed, &params(n, 3));
        let again = parse_model(&serialize_model(&m)).unwrap();
        prop_assert_eq!(&m, &again);
        prop_assert_eq!(serialize_model(&m), serialize_model(&again));
    }

    #[test]
    fn partition_blocks_are_disjoint_and_cover(seed in any::<u64>(), n in 1usize..15) {
        let m = random_mdp(seed, &params(n, 2));
        let req = parse_requirement(&random_persistence_requirement(seed, &props(), 4)).unwrap();
        let part = partition_states(&m, &req, &SolveOptions::default()).unwrap();
        for ob in &part.explored {
            let mut union = StateSet::empty(m.num_states());
            for b in &ob.blocks {
                prop_assert!(union.is_disjoint(b));
                union = union.union(b);
            }
            prop_assert_eq!(&union, &part.reach);
        }
    }

    #[test]
    fn products_have_one_tag_per_state(seed in any::<u64>(), n in 1usize..15) {
        let m = random_mdp(seed, &params(n, 3));
        let req = parse_requirement(&random_persistence_requirement(seed, &props(), 4)).unwrap();
        let out = synth_persistence(&m, &req, &SolveOptions::default()).unwrap();
        for v in 0..out.product.num_states() {
            let tags = out.product.tags(v);
            prop_assert_eq!(tags.len(), 1);
            let total: f64 = out.product.edges[v].iter().map(|e| e.prob).sum();
            prop_assert!((total - 1.0).abs() <= 1e-9);
            if matches!(tags[0], Tag::Tau | Tag::Context(_)) {
                prop_assert_eq!(out.product.edges[v].len(), 1);
            }
        }
        prop_assert!((0.0..=1.0).contains(&out.protocol.c));
    }
}
