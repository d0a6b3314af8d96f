//! Discrete-time Markov chains: bottom SCCs, reachability and persistence
//! probabilities.

use std::collections::VecDeque;

use super::{EngineError, StrategyMap};
use crate::mdp::{sccs, Mdp, StateId, StateSet};

/// Chains with at most this many undecided states are solved by dense
/// Gaussian elimination; larger ones by Gauss-Seidel.
const DENSE_LIMIT: usize = 500;
const GAUSS_SEIDEL_EPSILON: f64 = 1e-13;
const GAUSS_SEIDEL_MAX_SWEEPS: usize = 10_000_000;

/// A finite Markov chain. A state with an empty row is absorbing.
#[derive(Debug, Clone, PartialEq)]
pub struct Dtmc {
    pub initial: StateId,
    pub rows: Vec<Vec<(StateId, f64)>>,
}

impl Dtmc {
    pub fn new(initial: StateId, rows: Vec<Vec<(StateId, f64)>>) -> Self {
        Dtmc { initial, rows }
    }

    /// Reads an MDP that has at most one enabled action per state as a chain.
    pub fn from_mdp(mdp: &Mdp) -> Result<Dtmc, EngineError> {
        let mut rows = Vec::with_capacity(mdp.num_states());
        for s in 0..mdp.num_states() {
            let cs = mdp.choices(s);
            if cs.len() > 1 {
                return Err(EngineError::NotADtmc { state: s, choices: cs.len() });
            }
            rows.push(cs.first().map(|c| c.branches.clone()).unwrap_or_default());
        }
        Ok(Dtmc { initial: mdp.initial(), rows })
    }

    /// The chain induced by playing `strategy` in `mdp`. States without a
    /// strategy entry become absorbing.
    pub fn induced(mdp: &Mdp, strategy: &StrategyMap) -> Dtmc {
        let rows = (0..mdp.num_states()).map(|s| strategy.choice(mdp, s).map(|c| c.branches.clone()).unwrap_or_default()).collect();
        Dtmc { initial: mdp.initial(), rows }
    }

    pub fn num_states(&self) -> usize {
        self.rows.len()
    }

    pub fn successors(&self, s: StateId) -> impl Iterator<Item = StateId> + '_ {
        self.rows[s].iter().map(|&(t, _)| t)
    }

    /// States reachable from the initial state.
    pub fn reachable(&self) -> StateSet {
        let mut seen = StateSet::empty(self.num_states());
        let mut queue = VecDeque::from([self.initial]);
        seen.insert(self.initial);
        while let Some(s) = queue.pop_front() {
            for t in self.successors(s) {
                if seen.insert(t) {
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    /// Probability of eventually reaching `target`, for every state reachable
    /// from the initial state (zero elsewhere).
    pub fn reach_probs(&self, target: &StateSet) -> Result<Vec<f64>, EngineError> {
        let n = self.num_states();
        let live = self.reachable();
        let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for s in live.iter() {
            for t in self.successors(s) {
                preds[t].push(s);
            }
        }
        let backward = |from: &StateSet, through: &StateSet| {
            let mut seen = from.clone();
            let mut queue: VecDeque<StateId> = from.iter().collect();
            while let Some(t) = queue.pop_front() {
                for &s in &preds[t] {
                    if through.contains(s) && seen.insert(s) {
                        queue.push_back(s);
                    }
                }
            }
            seen
        };
        let target = target.intersection(&live);
        let can_reach = backward(&target, &live);
        let zero = live.difference(&can_reach);
        let can_fail = backward(&zero, &live.difference(&target));
        let one = live.difference(&can_fail);

        let mut x = vec![0.0; n];
        for s in one.iter() {
            x[s] = 1.0;
        }
        let maybe: Vec<StateId> = live.iter().filter(|&s| !one.contains(s) && !zero.contains(s)).collect();
        if maybe.is_empty() {
            return Ok(x);
        }
        if maybe.len() <= DENSE_LIMIT {
            solve_dense(self, &maybe, &one, &mut x)?;
        } else {
            solve_gauss_seidel(self, &maybe, &mut x)?;
        }
        for v in &mut x {
            *v = v.clamp(0.0, 1.0);
        }
        Ok(x)
    }

    pub fn reach_prob(&self, target: &StateSet) -> Result<f64, EngineError> {
        Ok(self.reach_probs(target)?[self.initial])
    }

    /// Bottom SCCs reachable from the initial state.
    pub fn bottom_sccs(&self) -> Vec<Vec<StateId>> {
        bottom_sccs(self)
    }

    /// Probability of eventually staying forever inside one accepting set.
    ///
    /// `accepting(v)` names the disjunct that accepts `v`, if any. A bottom
    /// SCC is accepting when all of its states are accepted by the same
    /// disjunct.
    pub fn persistence_prob(&self, accepting: impl Fn(StateId) -> Option<usize>) -> Result<f64, EngineError> {
        let mut good = StateSet::empty(self.num_states());
        for comp in self.bottom_sccs() {
            let first = accepting(comp[0]);
            if first.is_some() && comp.iter().all(|&v| accepting(v) == first) {
                for &v in &comp {
                    good.insert(v);
                }
            }
        }
        self.reach_prob(&good)
    }
}

/// Bottom strongly connected components of the part of `chain` reachable
/// from its initial state, each sorted, ordered by smallest state.
pub fn bottom_sccs(chain: &Dtmc) -> Vec<Vec<StateId>> {
    let nodes = chain.reachable().to_vec();
    let comps = sccs(chain.num_states(), &nodes, |v, out| out.extend(chain.successors(v)));
    let mut comp_of = vec![usize::MAX; chain.num_states()];
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of[v] = i;
        }
    }
    let mut out: Vec<Vec<StateId>> = comps
        .iter()
        .enumerate()
        .filter(|(i, c)| c.iter().all(|&v| chain.successors(v).all(|t| comp_of[t] == *i)))
        .map(|(_, c)| c.clone())
        .collect();
    out.sort_by_key(|c| c[0]);
    out
}

fn solve_dense(chain: &Dtmc, maybe: &[StateId], one: &StateSet, x: &mut [f64]) -> Result<(), EngineError> {
    let m = maybe.len();
    let mut index = vec![usize::MAX; chain.num_states()];
    for (i, &s) in maybe.iter().enumerate() {
        index[s] = i;
    }
    // (I - P_mm) y = P_m,one
    let mut a = vec![vec![0.0; m + 1]; m];
    for (i, &s) in maybe.iter().enumerate() {
        a[i][i] += 1.0;
        for &(t, p) in &chain.rows[s] {
            if index[t] != usize::MAX {
                a[i][index[t]] -= p;
            } else if one.contains(t) {
                a[i][m] += p;
            }
        }
    }
    for col in 0..m {
        let pivot = (col..m).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).expect("non-empty pivot range");
        if a[pivot][col].abs() < 1e-300 {
            return Err(EngineError::Singular);
        }
        a.swap(col, pivot);
        let (upper, lower) = a.split_at_mut(col + 1);
        let prow = &upper[col];
        for row in lower.iter_mut() {
            let f = row[col] / prow[col];
            if f != 0.0 {
                for k in col..=m {
                    row[k] -= f * prow[k];
                }
            }
        }
    }
    let mut y = vec![0.0; m];
    for i in (0..m).rev() {
        let mut acc = a[i][m];
        for k in i + 1..m {
            acc -= a[i][k] * y[k];
        }
        y[i] = acc / a[i][i];
    }
    for (i, &s) in maybe.iter().enumerate() {
        x[s] = y[i];
    }
    Ok(())
}

fn solve_gauss_seidel(chain: &Dtmc, maybe: &[StateId], x: &mut [f64]) -> Result<(), EngineError> {
    for _ in 0..GAUSS_SEIDEL_MAX_SWEEPS {
        let mut delta: f64 = 0.0;
        for &s in maybe {
            let mut self_p = 0.0;
            let mut acc = 0.0;
            for &(t, p) in &chain.rows[s] {
                if t == s {
                    self_p += p;
                } else {
                    acc += p * x[t];
                }
            }
            let v = acc / (1.0 - self_p);
            delta = delta.max((v - x[s]).abs());
            x[s] = v;
        }
        if delta < GAUSS_SEIDEL_EPSILON {
            return Ok(());
        }
    }
    Err(EngineError::NonConvergence { iterations: GAUSS_SEIDEL_MAX_SWEEPS, residual: f64::NAN })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn split(p: f64) -> Dtmc {
        // 0 -> {1: p, 2: 1-p}, both absorbing
        Dtmc::new(0, vec![vec![(1, p), (2, 1.0 - p)], vec![], vec![(2, 1.0)]])
    }

    #[test]
    fn absorbing_accepting_state() {
        let c = Dtmc::new(0, vec![vec![(1, 1.0)], vec![(1, 1.0)]]);
        assert_eq!(c.persistence_prob(|v| (v == 1).then_some(0)).unwrap(), 1.0);
    }

    #[test]
    fn no_accepting_bscc() {
        assert_eq!(split(0.3).persistence_prob(|_| None).unwrap(), 0.0);
    }

    #[test]
    fn split_probability() {
        let c = split(0.3);
        assert!((c.persistence_prob(|v| (v == 1).then_some(0)).unwrap() - 0.3).abs() < 1e-15);
        assert_eq!(c.bottom_sccs(), vec![vec![1], vec![2]]);
    }

    #[test]
    fn mixed_disjuncts_reject() {
        // BSCC {1,2} with 1 accepted by disjunct 0 and 2 by disjunct 1
        let c = Dtmc::new(0, vec![vec![(1, 1.0)], vec![(2, 1.0)], vec![(1, 1.0)]]);
        assert_eq!(c.persistence_prob(|v| (v > 0).then_some(v - 1)).unwrap(), 0.0);
        assert_eq!(c.persistence_prob(|v| (v > 0).then_some(0)).unwrap(), 1.0);
    }

    #[test]
    fn gauss_seidel_matches_dense() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let n = 300;
        // states 0 and 1 absorbing; the rest leak a little into both and
        // spread the remaining mass over up to three random successors
        let mut rows = vec![Vec::new(); n];
        for row in rows.iter_mut().skip(2) {
            let mut succ: Vec<usize> = (0..3).map(|_| rng.gen_range(2..n)).collect();
            succ.sort_unstable();
            succ.dedup();
            let p = 0.9 / succ.len() as f64;
            *row = vec![(0, 0.05), (1, 0.05)];
            row.extend(succ.into_iter().map(|t| (t, p)));
        }
        let chain = Dtmc::new(2, rows);
        let maybe: Vec<usize> = (2..n).collect();
        let one = StateSet::from_states(n, [1]);
        let mut dense = vec![0.0; n];
        dense[1] = 1.0;
        let mut gs = dense.clone();
        solve_dense(&chain, &maybe, &one, &mut dense).unwrap();
        solve_gauss_seidel(&chain, &maybe, &mut gs).unwrap();
        for s in 0..n {
            assert!((dense[s] - gs[s]).abs() < 1e-9, "state {s}: {} vs {}", dense[s], gs[s]);
        }
    }

    #[test]
    fn symmetric_walk_is_half() {
        let mut rows = vec![Vec::new(); 5];
        for (i, row) in rows.iter_mut().enumerate().take(4).skip(1) {
            *row = vec![(i - 1, 0.5), (i + 1, 0.5)];
        }
        let walk = Dtmc::new(2, rows);
        assert!((walk.reach_prob(&StateSet::from_states(5, [4])).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_nondeterminism() {
        let mut b = crate::mdp::MdpBuilder::new(2, 0);
        b.transition(0, "a", &[(1, 1.0)]).transition(0, "b", &[(0, 1.0)]);
        let m = b.build().unwrap();
        assert_eq!(Dtmc::from_mdp(&m), Err(EngineError::NotADtmc { state: 0, choices: 2 }));
    }
}
