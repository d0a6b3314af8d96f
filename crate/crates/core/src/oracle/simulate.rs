//! Monte-Carlo estimation of persistence probabilities.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::mdp::{StateId, StateSet};
use crate::pctl::Dtmc;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimStats {
    pub runs: u64,
    pub hits: u64,
    pub horizon: usize,
    pub mean: f64,
    /// Binomial standard error of `mean`.
    pub std_error: f64,
}

impl SimStats {
    /// Half-width of the normal-approximation confidence interval with
    /// `z` standard errors.
    pub fn half_width(&self, z: f64) -> f64 {
        z * self.std_error
    }
}

/// Default horizon: ten steps per state.
pub fn default_horizon(chain: &Dtmc) -> usize {
    10 * chain.num_states()
}

fn step(chain: &Dtmc, s: StateId, rng: &mut ChaCha8Rng) -> StateId {
    let row = &chain.rows[s];
    if row.is_empty() {
        return s;
    }
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for &(t, p) in row {
        acc += p;
        if u < acc {
            return t;
        }
    }
    row.last().expect("non-empty row").0
}

/// Runs `runs` paths of `horizon` steps from the initial state and counts
/// those that end inside `accepting`, which should be a union of bottom
/// SCCs so that a path inside it stays there forever.
pub fn simulate(chain: &Dtmc, accepting: &StateSet, runs: u64, horizon: usize, seed: u64) -> SimStats {
    assert!(runs >= 1, "at least one run");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0;
    for _ in 0..runs {
        let mut s = chain.initial;
        for _ in 0..horizon {
            s = step(chain, s, &mut rng);
        }
        if accepting.contains(s) {
            hits += 1;
        }
    }
    let mean = hits as f64 / runs as f64;
    let std_error = (mean * (1.0 - mean) / runs as f64).sqrt();
    SimStats { runs, hits, horizon, mean, std_error }
}

/// Union of the bottom SCCs whose states are all accepted by the same
/// disjunct, as in [`Dtmc::persistence_prob`].
pub fn accepting_bsccs(chain: &Dtmc, accepting: impl Fn(StateId) -> Option<usize>) -> StateSet {
    let mut good = StateSet::empty(chain.num_states());
    for comp in chain.bottom_sccs() {
        let first = accepting(comp[0]);
        if first.is_some() && comp.iter().all(|&v| accepting(v) == first) {
            for v in comp {
                good.insert(v);
            }
        }
    }
    good
}
