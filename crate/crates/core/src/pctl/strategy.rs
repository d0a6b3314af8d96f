//! Memoryless strategy extraction from converged value vectors.
//!
//! Plain argmax is not enough for maximal reachability: inside an end
//! component every action that stays put also attains the optimum, so a
//! greedy choice can loop forever without reaching the target. Choices are
//! therefore made in layers that move strictly closer to already-decided
//! states, and target components play their retained actions.

use super::mec::{mec_decomposition, Mec};
use super::precompute::prob1_max;
use super::ValueVector;
use crate::mdp::{ActionId, Choice, Mdp, StateId, StateSet};

/// Backups within this distance of the optimum count as optimal.
pub const ARGMAX_TOLERANCE: f64 = 1e-9;

/// A memoryless deterministic strategy: at most one action per state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyMap {
    choices: Vec<Option<ActionId>>,
}

impl StrategyMap {
    pub fn new(num_states: usize) -> Self {
        StrategyMap { choices: vec![None; num_states] }
    }

    pub fn get(&self, s: StateId) -> Option<ActionId> {
        self.choices.get(s).copied().flatten()
    }

    pub fn set(&mut self, s: StateId, a: Option<ActionId>) {
        self.choices[s] = a;
    }

    /// Defined entries in ascending state order.
    pub fn iter(&self) -> impl Iterator<Item = (StateId, ActionId)> + '_ {
        self.choices.iter().enumerate().filter_map(|(s, a)| a.map(|a| (s, a)))
    }

    pub fn len(&self) -> usize {
        self.iter().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The choice this strategy plays at `s`, if any.
    pub fn choice<'m>(&self, mdp: &'m Mdp, s: StateId) -> Option<&'m Choice> {
        self.get(s).and_then(|a| mdp.choice(s, a))
    }
}

fn expectation(c: &Choice, x: &[f64]) -> f64 {
    c.branches.iter().map(|&(t, p)| p * x[t]).sum()
}

fn first_action(mdp: &Mdp, s: StateId) -> Option<ActionId> {
    mdp.choices(s).first().map(|c| c.action)
}

/// Maximising strategy for `F target` (or `F G B` with `target` the union of
/// the accepting components), given its value vector.
pub fn extract_strategy(mdp: &Mdp, x: &ValueVector, target: &StateSet) -> StrategyMap {
    let all = StateSet::full(mdp.num_states());
    let yes = prob1_max(mdp, &all, target);
    let choices = mec_choices(mdp, &mec_decomposition(mdp, target), None);
    max_strategy(mdp, x, target, &yes, &|s| choices[s].or_else(|| first_action(mdp, s)))
}

/// Per-state choice for every state of the given components. Without
/// `visit` the lowest retained action is used; with it, retained actions
/// are chosen to reach `visit` states of the component again and again.
pub(crate) fn mec_choices(mdp: &Mdp, mecs: &[Mec], visit: Option<&StateSet>) -> Vec<Option<ActionId>> {
    let n = mdp.num_states();
    let mut out = vec![None; n];
    for mec in mecs {
        let lowest = |i: usize| mec.actions[i].first().copied();
        let goals: Vec<usize> = match visit {
            Some(v) => (0..mec.states.len()).filter(|&i| v.contains(mec.states[i])).collect(),
            None => (0..mec.states.len()).collect(),
        };
        if goals.is_empty() {
            for (i, &s) in mec.states.iter().enumerate() {
                out[s] = lowest(i);
            }
            continue;
        }
        let mut done = StateSet::empty(n);
        for &i in &goals {
            out[mec.states[i]] = lowest(i);
            done.insert(mec.states[i]);
        }
        loop {
            let mut layer = Vec::new();
            for (i, &s) in mec.states.iter().enumerate() {
                if done.contains(s) {
                    continue;
                }
                let pick =
                    mec.actions[i].iter().copied().find(|&a| mdp.choice(s, a).is_some_and(|c| c.successors().any(|t| done.contains(t))));
                if let Some(a) = pick {
                    layer.push((s, a));
                }
            }
            if layer.is_empty() {
                break;
            }
            for (s, a) in layer {
                out[s] = Some(a);
                done.insert(s);
            }
        }
    }
    out
}

/// Layered maximising strategy. `target` states play `target_choice`;
/// `yes` states (value one) play choices that stay inside `yes` and move
/// towards the target; the remaining positive states play near-optimal
/// choices that move towards decided positive states; zero states play their
/// first action.
pub(crate) fn max_strategy(
    mdp: &Mdp,
    x: &ValueVector,
    target: &StateSet,
    yes: &StateSet,
    target_choice: &dyn Fn(StateId) -> Option<ActionId>,
) -> StrategyMap {
    let n = mdp.num_states();
    let domain = x.domain();
    let v = x.raw();
    let mut strat = StrategyMap::new(n);
    let mut decided = StateSet::empty(n);
    for s in domain.intersection(target).iter() {
        strat.set(s, target_choice(s));
        decided.insert(s);
    }

    // attractor inside the value-one region
    let in_yes = domain.intersection(yes).difference(target);
    layered(mdp, &in_yes, &mut strat, &mut decided, |c| c.successors().all(|t| yes.contains(t)));
    let stuck: Vec<StateId> = in_yes.iter().filter(|&s| !decided.contains(s)).collect();
    for s in stuck {
        let pick = mdp.choices(s).iter().find(|c| c.successors().all(|t| yes.contains(t)));
        strat.set(s, pick.or(mdp.choices(s).first()).map(|c| c.action));
        decided.insert(s);
    }

    let positive = StateSet::from_states(n, domain.iter().filter(|&s| !decided.contains(s) && v[s] > 0.0));
    let best = |s: StateId| mdp.choices(s).iter().map(|c| expectation(c, v)).fold(f64::NEG_INFINITY, f64::max);
    let best_at: Vec<f64> = (0..n).map(|s| if positive.contains(s) { best(s) } else { 0.0 }).collect();
    let near_optimal = |s: StateId, c: &Choice| expectation(c, v) >= best_at[s] - ARGMAX_TOLERANCE;
    // only states with positive value count as progress
    let mut progress = StateSet::from_states(n, decided.iter().filter(|&s| v[s] > 0.0 || yes.contains(s)));
    layered_with(mdp, &positive, &mut strat, &mut progress, near_optimal);
    for s in positive.iter().filter(|&s| !progress.contains(s)) {
        let pick = mdp.choices(s).iter().find(|c| near_optimal(s, c));
        strat.set(s, pick.map(|c| c.action));
    }

    for s in domain.iter() {
        if !decided.contains(s) && !positive.contains(s) {
            strat.set(s, first_action(mdp, s));
        }
    }
    strat
}

fn layered(mdp: &Mdp, region: &StateSet, strat: &mut StrategyMap, decided: &mut StateSet, ok: impl Fn(&Choice) -> bool) {
    layered_with(mdp, region, strat, decided, |_, c| ok(c))
}

/// Assigns, layer by layer, the lowest-index admissible choice of each
/// undecided `region` state that has a successor in `decided`.
fn layered_with(mdp: &Mdp, region: &StateSet, strat: &mut StrategyMap, decided: &mut StateSet, ok: impl Fn(StateId, &Choice) -> bool) {
    let n = mdp.num_states();
    let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); n];
    for s in region.iter() {
        for c in mdp.choices(s) {
            for t in c.successors() {
                preds[t].push(s);
            }
        }
    }
    let mut frontier: Vec<StateId> = decided.iter().collect();
    while !frontier.is_empty() {
        let mut candidates: Vec<StateId> = frontier.iter().flat_map(|&t| preds[t].iter().copied()).collect();
        candidates.sort_unstable();
        candidates.dedup();
        let mut layer = Vec::new();
        for s in candidates {
            if decided.contains(s) {
                continue;
            }
            let pick = mdp.choices(s).iter().find(|c| ok(s, c) && c.successors().any(|t| decided.contains(t)));
            if let Some(c) = pick {
                layer.push((s, c.action));
            }
        }
        frontier.clear();
        for (s, a) in layer {
            strat.set(s, Some(a));
            decided.insert(s);
            frontier.push(s);
        }
    }
}

/// Minimising strategy for `F target`: states with value zero play a choice
/// that stays in `no`; the rest play the lowest-index near-argmin.
pub(crate) fn min_strategy(mdp: &Mdp, x: &ValueVector, target: &StateSet, no: &StateSet) -> StrategyMap {
    let n = mdp.num_states();
    let v = x.raw();
    let mut strat = StrategyMap::new(n);
    for s in x.domain().iter() {
        let cs = mdp.choices(s);
        let pick = if target.contains(s) {
            cs.first()
        } else if no.contains(s) {
            cs.iter().find(|c| c.successors().all(|t| no.contains(t))).or(cs.first())
        } else {
            let lo = cs.iter().map(|c| expectation(c, v)).fold(f64::INFINITY, f64::min);
            cs.iter().find(|c| expectation(c, v) <= lo + ARGMAX_TOLERANCE)
        };
        strat.set(s, pick.map(|c| c.action));
    }
    strat
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdp::MdpBuilder;
    use crate::pctl::{max_reach_values, persistence_values, SolveOptions};

    #[test]
    fn picks_better_action() {
        let mut b = MdpBuilder::new(3, 0);
        b.transition(0, "b", &[(1, 0.5), (2, 0.5)]).transition(0, "a", &[(1, 0.9), (2, 0.1)]);
        b.transition(1, "a", &[(1, 1.0)]).transition(2, "a", &[(2, 1.0)]);
        let m = b.build().unwrap();
        let goal = StateSet::from_states(3, [1]);
        let x = max_reach_values(&m, &goal, &SolveOptions::default()).unwrap();
        let s = extract_strategy(&m, &x, &goal);
        assert_eq!(m.action_name(s.get(0).unwrap()), "a");
    }

    #[test]
    fn tie_goes_to_earlier_action() {
        let mut b = MdpBuilder::new(2, 0);
        b.transition(0, "first", &[(1, 1.0)]).transition(0, "second", &[(1, 1.0)]);
        let m = b.build().unwrap();
        let goal = StateSet::from_states(2, [1]);
        let x = max_reach_values(&m, &goal, &SolveOptions::default()).unwrap();
        assert_eq!(extract_strategy(&m, &x, &goal).get(0), m.action_id("first"));
    }

    #[test]
    fn self_loop_is_not_chosen_over_progress() {
        // "stay" is declared first and ties at value 1, but never reaches the goal
        let mut b = MdpBuilder::new(2, 0);
        b.transition(0, "stay", &[(0, 1.0)]).transition(0, "go", &[(1, 1.0)]);
        b.transition(1, "stay", &[(1, 1.0)]);
        let m = b.build().unwrap();
        let goal = StateSet::from_states(2, [1]);
        let x = max_reach_values(&m, &goal, &SolveOptions::default()).unwrap();
        assert_eq!(extract_strategy(&m, &x, &goal).get(0), m.action_id("go"));
    }

    #[test]
    fn accepting_component_plays_retained_action() {
        // 1 is in B with actions "leave" (to 2, not B) and "loop"
        let mut b = MdpBuilder::new(3, 0);
        b.transition(0, "go", &[(1, 1.0)]);
        b.transition(1, "leave", &[(2, 1.0)]).transition(1, "loop", &[(1, 1.0)]);
        b.transition(2, "go", &[(2, 1.0)]);
        let m = b.build().unwrap();
        let bset = StateSet::from_states(3, [1]);
        let x = persistence_values(&m, &bset, &SolveOptions::default()).unwrap();
        let t = crate::pctl::accepting_states(&m, &bset);
        assert_eq!(extract_strategy(&m, &x, &t).get(1), m.action_id("loop"));
    }
}
