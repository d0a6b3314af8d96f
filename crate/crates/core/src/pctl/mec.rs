//! Maximal end component decomposition.

use crate::mdp::{sccs, ActionId, Mdp, StateId, StateSet};

/// A maximal end component: its states and, per state, the actions that
/// keep the play inside the component.
#[derive(Debug, Clone, PartialEq)]
pub struct Mec {
    pub states: Vec<StateId>,
    /// Retained actions, parallel to `states`, ascending. Empty for a
    /// deadlock state, which counts as absorbing.
    pub actions: Vec<Vec<ActionId>>,
}

impl Mec {
    pub fn contains(&self, s: StateId) -> bool {
        self.states.binary_search(&s).is_ok()
    }

    /// Retained actions at `s`, or `None` when `s` is not in the component.
    pub fn retained(&self, s: StateId) -> Option<&[ActionId]> {
        self.states.binary_search(&s).ok().map(|i| self.actions[i].as_slice())
    }

    pub fn state_set(&self, universe: usize) -> StateSet {
        StateSet::from_states(universe, self.states.iter().copied())
    }
}

/// MECs of the sub-MDP induced by `restrict_to`, ordered by smallest state.
///
/// Repeatedly splits into SCCs and drops choices that can leave their SCC
/// until nothing changes.
pub fn mec_decomposition(mdp: &Mdp, restrict_to: &StateSet) -> Vec<Mec> {
    let n = mdp.num_states();
    let mut alive = restrict_to.clone();
    let mut valid: Vec<Vec<bool>> =
        (0..n).map(|s| mdp.choices(s).iter().map(|c| alive.contains(s) && c.successors().all(|t| alive.contains(t))).collect()).collect();

    loop {
        let nodes = alive.to_vec();
        let comps = sccs(n, &nodes, |v, out| {
            for (ci, c) in mdp.choices(v).iter().enumerate() {
                if valid[v][ci] {
                    out.extend(c.successors());
                }
            }
        });
        let mut comp_of = vec![usize::MAX; n];
        for (i, comp) in comps.iter().enumerate() {
            for &s in comp {
                comp_of[s] = i;
            }
        }

        let mut changed = false;
        for &s in &nodes {
            for (ci, c) in mdp.choices(s).iter().enumerate() {
                if valid[s][ci] && c.successors().any(|t| comp_of[t] != comp_of[s]) {
                    valid[s][ci] = false;
                    changed = true;
                }
            }
        }
        for &s in &nodes {
            if !mdp.is_deadlock(s) && !valid[s].iter().any(|&v| v) {
                alive.remove(s);
                changed = true;
                // choices into a removed state become invalid on the next pass
                for (ci, _) in mdp.choices(s).iter().enumerate() {
                    valid[s][ci] = false;
                }
            }
        }
        if changed {
            for s in alive.to_vec() {
                for (ci, c) in mdp.choices(s).iter().enumerate() {
                    if valid[s][ci] && !c.successors().all(|t| alive.contains(t)) {
                        valid[s][ci] = false;
                    }
                }
            }
            continue;
        }

        let mut mecs: Vec<Mec> = comps
            .into_iter()
            .map(|states| {
                let actions = states
                    .iter()
                    .map(|&s| mdp.choices(s).iter().enumerate().filter(|&(ci, _)| valid[s][ci]).map(|(_, c)| c.action).collect())
                    .collect();
                Mec { states, actions }
            })
            .collect();
        mecs.sort_by_key(|m| m.states[0]);
        return mecs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdp::MdpBuilder;

    #[test]
    fn absorbing_state_is_singleton() {
        let mut b = MdpBuilder::new(2, 0);
        b.transition(0, "a", &[(1, 1.0)]).transition(1, "a", &[(1, 1.0)]);
        let m = b.build().unwrap();
        let mecs = mec_decomposition(&m, &StateSet::full(2));
        assert_eq!(mecs.len(), 1);
        assert_eq!(mecs[0].states, vec![1]);
        assert_eq!(mecs[0].actions, vec![vec![0]]);
    }

    #[test]
    fn two_disjoint_cycles() {
        // 0 <-> 1 and 2 <-> 3, with 0 -b-> 2 as a one-way bridge
        let mut b = MdpBuilder::new(4, 0);
        b.transition(0, "a", &[(1, 1.0)]).transition(1, "a", &[(0, 1.0)]);
        b.transition(0, "b", &[(2, 1.0)]);
        b.transition(2, "a", &[(3, 1.0)]).transition(3, "a", &[(2, 1.0)]);
        let m = b.build().unwrap();
        let mecs = mec_decomposition(&m, &StateSet::full(4));
        let states: Vec<_> = mecs.iter().map(|m| m.states.clone()).collect();
        assert_eq!(states, vec![vec![0, 1], vec![2, 3]]);
        // the bridge is not retained
        assert_eq!(mecs[0].retained(0), Some(&[0][..]));
    }

    #[test]
    fn probabilistic_leak_breaks_component() {
        // 0 -a-> {1 .5, 2 .5}, 1 -a-> 0, 2 absorbing: {0,1} is not an end component
        let mut b = MdpBuilder::new(3, 0);
        b.transition(0, "a", &[(1, 0.5), (2, 0.5)]).transition(1, "a", &[(0, 1.0)]);
        b.transition(2, "a", &[(2, 1.0)]);
        let m = b.build().unwrap();
        let mecs = mec_decomposition(&m, &StateSet::full(3));
        assert_eq!(mecs.len(), 1);
        assert_eq!(mecs[0].states, vec![2]);
    }

    #[test]
    fn restriction_cuts_components() {
        let mut b = MdpBuilder::new(2, 0);
        b.transition(0, "a", &[(1, 1.0)]).transition(1, "a", &[(0, 1.0)]);
        let m = b.build().unwrap();
        assert_eq!(mec_decomposition(&m, &StateSet::full(2)).len(), 1);
        assert!(mec_decomposition(&m, &StateSet::from_states(2, [0])).is_empty());
    }

    #[test]
    fn deadlock_is_absorbing_component() {
        let mut b = MdpBuilder::new(2, 0);
        b.transition(0, "a", &[(1, 1.0)]);
        let m = b.build().unwrap();
        let mecs = mec_decomposition(&m, &StateSet::full(2));
        assert_eq!(mecs.len(), 1);
        assert_eq!(mecs[0].states, vec![1]);
        assert!(mecs[0].actions[0].is_empty());
    }
}
