//! Seeded random models and persistence requirements.

use std::fmt::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::mdp::{Mdp, MdpBuilder};

const ACTION_POOL: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

#[derive(Debug, Clone, PartialEq)]
pub struct RandomMdpParams {
    pub states: usize,
    pub max_actions: usize,
    pub max_branches: usize,
    pub props: Vec<String>,
    /// Chance that a state carries a given proposition.
    pub label_prob: f64,
    /// Chance that a state (other than the initial one) has no actions.
    pub deadlock_prob: f64,
}

impl Default for RandomMdpParams {
    fn default() -> Self {
        RandomMdpParams {
            states: 8,
            max_actions: 2,
            max_branches: 3,
            props: vec!["b0".into(), "b1".into(), "b2".into()],
            label_prob: 0.4,
            deadlock_prob: 0.05,
        }
    }
}

/// Random MDP with at most `params.states` states. Branch probabilities are
/// small integer weights normalised to one.
pub fn random_mdp(seed: u64, params: &RandomMdpParams) -> Mdp {
    assert!(params.states >= 1 && params.max_actions >= 1 && params.max_actions <= ACTION_POOL.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = params.states;
    let mut b = MdpBuilder::new(n, 0);
    for a in &ACTION_POOL[..params.max_actions] {
        b.action(a);
    }
    for p in &params.props {
        b.prop(p);
    }
    for s in 0..n {
        for p in &params.props {
            if rng.gen_bool(params.label_prob) {
                b.label(s, p);
            }
        }
        if s != 0 && rng.gen_bool(params.deadlock_prob) {
            continue;
        }
        let k = rng.gen_range(1..=params.max_actions);
        let mut acts = ACTION_POOL[..params.max_actions].to_vec();
        acts.shuffle(&mut rng);
        let mut acts = acts[..k].to_vec();
        acts.sort_unstable();
        for a in acts {
            let m = rng.gen_range(1..=params.max_branches.min(n));
            let mut targets: Vec<usize> = (0..n).collect();
            targets.shuffle(&mut rng);
            targets.truncate(m);
            targets.sort_unstable();
            let weights: Vec<u32> = targets.iter().map(|_| rng.gen_range(1..=4)).collect();
            let total: u32 = weights.iter().sum();
            let branches: Vec<(usize, f64)> = targets.iter().zip(&weights).map(|(&t, &w)| (t, w as f64 / total as f64)).collect();
            b.transition(s, a, &branches);
        }
    }
    b.build().expect("random model is valid")
}

fn random_formula(rng: &mut ChaCha8Rng, props: &[String]) -> String {
    let atom = |rng: &mut ChaCha8Rng| format!("\"{}\"", props.choose(rng).expect("at least one proposition"));
    match rng.gen_range(0..5) {
        0 | 1 => atom(rng),
        2 => format!("!{}", atom(rng)),
        3 => format!("({} & {})", atom(rng), atom(rng)),
        _ => format!("({} | {})", atom(rng), atom(rng)),
    }
}

/// Random persistence requirement over `props` with up to `max_objectives`
/// objectives. Objective `qi` only has contexts towards later objectives,
/// and the contexts of one objective split `[0, c)` at random cut points.
pub fn random_persistence_requirement(seed: u64, props: &[String], max_objectives: usize) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.gen_range(1..=max_objectives.max(1));
    let mut out = String::new();
    for i in 0..k {
        let _ = writeln!(out, "objective q{i} = Pmax [ F G {} ];", random_formula(&mut rng, props));
    }
    for i in 0..k.saturating_sub(1) {
        let later: Vec<usize> = (i + 1..k).collect();
        let m = rng.gen_range(0..=later.len().min(2));
        if m == 0 {
            continue;
        }
        let targets: Vec<usize> = later.choose_multiple(&mut rng, m).copied().collect();
        let c = if rng.gen_bool(0.5) { 1.0 } else { rng.gen_range(30..=95) as f64 / 100.0 };
        // cut points in hundredths, strictly increasing below c
        let mut cuts: Vec<u32> = Vec::new();
        while cuts.len() < m - 1 {
            let x = rng.gen_range(5..(c * 100.0) as u32);
            if !cuts.contains(&x) {
                cuts.push(x);
            }
        }
        cuts.sort_unstable();
        let mut bounds: Vec<f64> = vec![0.0];
        bounds.extend(cuts.iter().map(|&x| x as f64 / 100.0));
        bounds.push(c);
        for (j, &t) in targets.iter().enumerate() {
            let (lo, hi) = (bounds[j], bounds[j + 1]);
            let when = if lo == 0.0 { format!("< {hi}") } else { format!("in [{lo}, {hi})") };
            let _ = writeln!(out, "context w{i}_{t} : q{i} -> q{t} when Pmax {when};");
        }
    }
    out.push_str("initial q0;\n");
    out
}
