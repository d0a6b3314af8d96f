//! The float engine checked against the exact and brute-force oracles.

use captl_core::casestudy::random::{random_mdp, RandomMdpParams};
use captl_core::casestudy::{gen_meda, MedaParams};
use captl_core::mdp::{Mdp, StateSet};
use captl_core::oracle::{enumerate_strategy_optimum, exact_dtmc_reach, naive_mecs, to_f64, Goal};
use captl_core::pctl::{
    eval_state_formula, max_reach_values, mec_decomposition, min_reach_values, persistence_values, solve_objective, Direction, Dtmc,
    PathFormula, SolveOptions, StateFormula,
};
use captl_core::Exec;

const TOL: f64 = 1e-6;

// stopping at a 1e-6 change can leave a larger true error on slow chains
fn opts() -> SolveOptions {
    SolveOptions { epsilon: 1e-9, ..SolveOptions::default() }
}

fn label_set(m: &Mdp, p: &str) -> StateSet {
    eval_state_formula(m, &StateFormula::atom(p)).unwrap().states
}

#[test]
fn reachability_matches_enumeration() {
    let opts = opts();
    for seed in 0..40 {
        let m = random_mdp(seed, &RandomMdpParams::default());
        let t = label_set(&m, "b0");
        let hi = max_reach_values(&m, &t, &opts).unwrap().at(0);
        let lo = min_reach_values(&m, &t, &opts).unwrap().at(0);
        let ohi = to_f64(&enumerate_strategy_optimum(&m, &Goal::Reach(t.clone()), Direction::Max, Exec::Parallel).unwrap());
        let olo = to_f64(&enumerate_strategy_optimum(&m, &Goal::Reach(t), Direction::Min, Exec::Parallel).unwrap());
        assert!((hi - ohi).abs() <= TOL, "seed {seed}: max {hi} vs {ohi}");
        assert!((lo - olo).abs() <= TOL, "seed {seed}: min {lo} vs {olo}");
    }
}

#[test]
fn persistence_matches_enumeration() {
    let opts = opts();
    for seed in 100..140 {
        let m = random_mdp(seed, &RandomMdpParams::default());
        let b = label_set(&m, "b1");
        let hi = persistence_values(&m, &b, &opts).unwrap().at(0);
        let path = PathFormula::EventuallyAlways(StateFormula::atom("b1"));
        let lo = solve_objective(&m, 0, Direction::Min, &path, &opts).unwrap().values.at(0);
        let ohi = to_f64(&enumerate_strategy_optimum(&m, &Goal::Persist(b.clone()), Direction::Max, Exec::Parallel).unwrap());
        let olo = to_f64(&enumerate_strategy_optimum(&m, &Goal::Persist(b), Direction::Min, Exec::Parallel).unwrap());
        assert!((hi - ohi).abs() <= TOL, "seed {seed}: max {hi} vs {ohi}");
        assert!((lo - olo).abs() <= TOL, "seed {seed}: min {lo} vs {olo}");
    }
}

#[test]
fn mecs_match_naive_fixpoint() {
    let params = RandomMdpParams { states: 12, max_actions: 3, ..RandomMdpParams::default() };
    for seed in 0..60 {
        let m = random_mdp(seed, &params);
        let fast: Vec<_> = mec_decomposition(&m, &StateSet::full(m.num_states())).into_iter().map(|c| (c.states, c.actions)).collect();
        assert_eq!(fast, naive_mecs(&m), "seed {seed}");
    }
}

#[test]
fn chain_solver_matches_exact() {
    let params = RandomMdpParams { states: 30, max_actions: 1, max_branches: 3, ..RandomMdpParams::default() };
    for seed in 0..30 {
        let m = random_mdp(seed, &params);
        let chain = Dtmc::from_mdp(&m).unwrap();
        let t = label_set(&m, "b2");
        let fast = chain.reach_probs(&t).unwrap();
        let exact = exact_dtmc_reach(&chain, &t).unwrap();
        // the float solver only covers states reachable from the initial one
        for s in chain.reachable().iter() {
            assert!((fast[s] - to_f64(&exact[s])).abs() <= 1e-9, "seed {seed} state {s}: {} vs {}", fast[s], to_f64(&exact[s]));
        }
    }
}

#[test]
fn sequential_and_parallel_agree_bitwise() {
    // large enough for the backups to fan out
    let m = gen_meda(&MedaParams::default()).unwrap().model;
    assert!(m.num_states() > 2 * captl_core::par::PAR_THRESHOLD);
    let path = PathFormula::EventuallyAlways(StateFormula::atom("mixed"));
    let seq = SolveOptions { exec: Exec::Sequential, ..SolveOptions::default() };
    let par = SolveOptions { exec: Exec::Parallel, ..SolveOptions::default() };
    for dir in [Direction::Max, Direction::Min] {
        let a = solve_objective(&m, m.initial(), dir, &path, &seq).unwrap();
        let b = solve_objective(&m, m.initial(), dir, &path, &par).unwrap();
        assert_eq!(a.values.raw(), b.values.raw());
        assert_eq!(a.strategy, b.strategy);
    }
}
