//! Qualitative graph precomputation for reachability objectives.
//!
//! All functions take an `allowed` set: paths may only pass through allowed
//! states before hitting the target (`allowed U target`). Plain reachability
//! uses the full state set. Deadlock states behave as absorbing.

use std::collections::VecDeque;

use crate::mdp::{Mdp, StateId, StateSet};

/// Reverse edges: for every state, the `(predecessor, choice index)` pairs
/// that can move into it.
pub(crate) struct Predecessors {
    preds: Vec<Vec<(StateId, usize)>>,
}

impl Predecessors {
    pub fn new(mdp: &Mdp) -> Self {
        let mut preds = vec![Vec::new(); mdp.num_states()];
        for s in 0..mdp.num_states() {
            for (ci, c) in mdp.choices(s).iter().enumerate() {
                for t in c.successors() {
                    preds[t].push((s, ci));
                }
            }
        }
        Predecessors { preds }
    }

    pub fn of(&self, t: StateId) -> &[(StateId, usize)] {
        &self.preds[t]
    }
}

/// States that can reach `target` through `allowed` states under some
/// strategy (the backward existential closure).
fn exists_reach(mdp: &Mdp, preds: &Predecessors, allowed: &StateSet, target: &StateSet, valid: Option<&[Vec<bool>]>) -> StateSet {
    let mut seen = target.clone();
    let mut queue: VecDeque<StateId> = target.iter().collect();
    while let Some(t) = queue.pop_front() {
        for &(s, ci) in preds.of(t) {
            if seen.contains(s) || !allowed.contains(s) {
                continue;
            }
            if valid.is_some_and(|v| !v[s][ci]) {
                continue;
            }
            seen.insert(s);
            queue.push_back(s);
        }
    }
    let _ = mdp;
    seen
}

/// States where the maximal probability of `allowed U target` is zero.
pub fn prob0_max(mdp: &Mdp, allowed: &StateSet, target: &StateSet) -> StateSet {
    prob0_max_with(mdp, &Predecessors::new(mdp), allowed, target)
}

pub(crate) fn prob0_max_with(mdp: &Mdp, preds: &Predecessors, allowed: &StateSet, target: &StateSet) -> StateSet {
    exists_reach(mdp, preds, allowed, target, None).complement()
}

/// States where the maximal probability of `allowed U target` is one.
pub fn prob1_max(mdp: &Mdp, allowed: &StateSet, target: &StateSet) -> StateSet {
    let preds = Predecessors::new(mdp);
    prob1_max_with(mdp, &preds, allowed, target)
}

pub(crate) fn prob1_max_with(mdp: &Mdp, preds: &Predecessors, allowed: &StateSet, target: &StateSet) -> StateSet {
    let n = mdp.num_states();
    let mut u = exists_reach(mdp, preds, allowed, target, None);
    loop {
        // choices that cannot leave u
        let valid: Vec<Vec<bool>> =
            (0..n).map(|s| mdp.choices(s).iter().map(|c| c.successors().all(|t| u.contains(t))).collect()).collect();
        let allowed_u = allowed.intersection(&u);
        let next = exists_reach(mdp, preds, &allowed_u, target, Some(&valid));
        if next == u {
            return u;
        }
        u = next;
    }
}

/// States where the minimal probability of `allowed U target` is zero: some
/// strategy avoids the target surely.
pub fn prob0_min(mdp: &Mdp, allowed: &StateSet, target: &StateSet) -> StateSet {
    let preds = Predecessors::new(mdp);
    prob0_min_with(mdp, &preds, allowed, target)
}

pub(crate) fn prob0_min_with(mdp: &Mdp, preds: &Predecessors, allowed: &StateSet, target: &StateSet) -> StateSet {
    let n = mdp.num_states();
    // r: states where every strategy reaches the target with positive probability
    let mut r = target.clone();
    let mut hit: Vec<Vec<bool>> = (0..n).map(|s| vec![false; mdp.choices(s).len()]).collect();
    let mut satisfied = vec![0usize; n];
    let mut queue: VecDeque<StateId> = target.iter().collect();
    while let Some(t) = queue.pop_front() {
        for &(s, ci) in preds.of(t) {
            if r.contains(s) || !allowed.contains(s) || hit[s][ci] {
                continue;
            }
            hit[s][ci] = true;
            satisfied[s] += 1;
            if satisfied[s] == mdp.choices(s).len() {
                r.insert(s);
                queue.push_back(s);
            }
        }
    }
    r.complement()
}

/// States where the minimal probability of `allowed U target` is one.
pub fn prob1_min(mdp: &Mdp, allowed: &StateSet, target: &StateSet) -> StateSet {
    prob1_min_with(mdp, &Predecessors::new(mdp), allowed, target)
}

pub(crate) fn prob1_min_with(mdp: &Mdp, preds: &Predecessors, allowed: &StateSet, target: &StateSet) -> StateSet {
    let zero = prob0_min_with(mdp, preds, allowed, target);
    let avoid = allowed.difference(target);
    exists_reach(mdp, preds, &avoid, &zero, None).complement()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdp::MdpBuilder;

    // 0 -a-> {1: .5, 2: .5}, 0 -b-> 3; 1 goal; 2 trap; 3 -a-> 0
    fn sample() -> Mdp {
        let mut b = MdpBuilder::new(4, 0);
        b.transition(0, "a", &[(1, 0.5), (2, 0.5)]);
        b.transition(0, "b", &[(3, 1.0)]);
        b.transition(1, "a", &[(1, 1.0)]);
        b.transition(2, "a", &[(2, 1.0)]);
        b.transition(3, "a", &[(0, 1.0)]);
        b.build().unwrap()
    }

    #[test]
    fn full_target_is_prob1() {
        let m = sample();
        let all = StateSet::full(4);
        assert_eq!(prob1_max(&m, &all, &all), all);
    }

    #[test]
    fn unreachable_target_is_prob0() {
        let m = sample();
        let all = StateSet::full(4);
        let goal = StateSet::from_states(4, [1]);
        assert_eq!(prob0_max(&m, &all, &goal).to_vec(), vec![2]);
        assert_eq!(prob1_max(&m, &all, &goal).to_vec(), vec![1]);
        // looping 0 -> 3 -> 0 forever avoids the goal
        assert_eq!(prob0_min(&m, &all, &goal).to_vec(), vec![0, 2, 3]);
        assert_eq!(prob1_min(&m, &all, &goal).to_vec(), vec![1]);
    }

    #[test]
    fn prob1_needs_a_strategy_not_a_path() {
        // 0 -a-> {goal .5, 0 .5} : reach w.p. 1 by repetition
        let mut b = MdpBuilder::new(2, 0);
        b.transition(0, "a", &[(1, 0.5), (0, 0.5)]);
        let m = b.build().unwrap();
        let all = StateSet::full(2);
        let goal = StateSet::from_states(2, [1]);
        assert_eq!(prob1_max(&m, &all, &goal).to_vec(), vec![0, 1]);
        assert_eq!(prob1_min(&m, &all, &goal).to_vec(), vec![0, 1]);
    }
}
