//! Maximal end components by the textbook fixpoint, without any SCC
//! algorithm: mutual reachability is read off a full transitive closure.

use crate::mdp::{ActionId, Mdp, StateId};

/// MECs of `mdp` as (sorted states, retained actions per state), ordered by
/// smallest state. A deadlock is its own MEC with no actions.
pub fn naive_mecs(mdp: &Mdp) -> Vec<(Vec<StateId>, Vec<Vec<ActionId>>)> {
    let n = mdp.num_states();
    let mut alive = vec![true; n];
    let mut acts: Vec<Vec<ActionId>> = (0..n).map(|s| mdp.choices(s).iter().map(|c| c.action).collect()).collect();
    let mut comp = vec![usize::MAX; n];
    loop {
        // closure over the remaining edges
        let reach: Vec<Vec<bool>> = (0..n)
            .map(|s| {
                let mut seen = vec![false; n];
                if !alive[s] {
                    return seen;
                }
                seen[s] = true;
                let mut stack = vec![s];
                while let Some(v) = stack.pop() {
                    for &a in &acts[v] {
                        for (t, _) in &mdp.choice(v, a).expect("enabled").branches {
                            if alive[*t] && !seen[*t] {
                                seen[*t] = true;
                                stack.push(*t);
                            }
                        }
                    }
                }
                seen
            })
            .collect();
        for s in 0..n {
            comp[s] = if alive[s] { (0..n).find(|&t| reach[s][t] && reach[t][s]).expect("self") } else { usize::MAX };
        }
        let mut changed = false;
        for s in 0..n {
            if !alive[s] {
                continue;
            }
            let before = acts[s].len();
            acts[s].retain(|&a| mdp.choice(s, a).expect("enabled").branches.iter().all(|(t, _)| alive[*t] && comp[*t] == comp[s]));
            changed |= acts[s].len() != before;
            if acts[s].is_empty() && !mdp.is_deadlock(s) {
                alive[s] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut out: Vec<(Vec<StateId>, Vec<Vec<ActionId>>)> = Vec::new();
    for root in 0..n {
        if !alive[root] || comp[root] != root {
            continue;
        }
        let states: Vec<StateId> = (0..n).filter(|&s| alive[s] && comp[s] == root).collect();
        // a non-deadlock singleton needs a self-loop, which the pruning kept
        let actions = states.iter().map(|&s| acts[s].clone()).collect();
        out.push((states, actions));
    }
    out.sort_by_key(|(s, _)| s[0]);
    out
}
