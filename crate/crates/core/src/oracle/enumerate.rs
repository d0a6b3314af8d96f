//! Optimal values by brute force over all memoryless deterministic
//! strategies.

use num::BigRational;

use super::exact::exact_dtmc_reach;
use crate::mdp::{Mdp, StateId, StateSet};
use crate::par::{self, Exec};
use crate::pctl::{Direction, Dtmc, EngineError};

/// Largest number of strategies [`enumerate_strategy_optimum`] will try.
pub const STRATEGY_LIMIT: u64 = 1_000_000;

const SHARDS: u64 = 64;

#[derive(Debug, Clone, PartialEq)]
pub enum Goal {
    /// `F target`
    Reach(StateSet),
    /// `F G target`
    Persist(StateSet),
}

fn reachable(mdp: &Mdp) -> Vec<StateId> {
    let mut seen = vec![false; mdp.num_states()];
    let mut stack = vec![mdp.initial()];
    seen[mdp.initial()] = true;
    while let Some(s) = stack.pop() {
        for c in mdp.choices(s) {
            for (t, _) in &c.branches {
                if !seen[*t] {
                    seen[*t] = true;
                    stack.push(*t);
                }
            }
        }
    }
    (0..mdp.num_states()).filter(|&s| seen[s]).collect()
}

/// Per state, the set of states it reaches in `rows` (itself included).
fn closure(rows: &[Vec<(StateId, f64)>]) -> Vec<Vec<bool>> {
    let n = rows.len();
    (0..n)
        .map(|s| {
            let mut seen = vec![false; n];
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &(t, _) in &rows[v] {
                    if !seen[t] {
                        seen[t] = true;
                        stack.push(t);
                    }
                }
            }
            seen
        })
        .collect()
}

/// States of `chain` lying in a bottom SCC contained in `good`.
pub fn accepting_bscc_states(chain: &Dtmc, good: &StateSet) -> StateSet {
    let n = chain.num_states();
    let reach = closure(&chain.rows);
    let in_bscc = |s: usize| (0..n).all(|t| !reach[s][t] || reach[t][s]);
    StateSet::from_states(n, (0..n).filter(|&s| in_bscc(s) && (0..n).all(|t| !reach[s][t] || good.contains(t))))
}

fn value_of(mdp: &Mdp, goal: &Goal, active: &[StateId], digits: &[usize]) -> Result<BigRational, EngineError> {
    let mut rows = vec![Vec::new(); mdp.num_states()];
    for (&s, &d) in active.iter().zip(digits) {
        rows[s] = mdp.choices(s)[d].branches.clone();
    }
    let chain = Dtmc::new(mdp.initial(), rows);
    let target = match goal {
        Goal::Reach(t) => t.clone(),
        Goal::Persist(b) => accepting_bscc_states(&chain, b),
    };
    let x = exact_dtmc_reach(&chain, &target)?;
    Ok(x[mdp.initial()].clone())
}

/// Exact optimum of `goal` at the initial state over all memoryless
/// deterministic strategies. Only states reachable from the initial state
/// are branched on; deadlocks stay absorbing.
pub fn enumerate_strategy_optimum(mdp: &Mdp, goal: &Goal, direction: Direction, exec: Exec) -> Result<BigRational, EngineError> {
    let active: Vec<StateId> = reachable(mdp).into_iter().filter(|&s| !mdp.is_deadlock(s)).collect();
    let radix: Vec<usize> = active.iter().map(|&s| mdp.choices(s).len()).collect();
    let mut total: u64 = 1;
    for &r in &radix {
        total = total.saturating_mul(r as u64);
        if total > STRATEGY_LIMIT {
            return Err(EngineError::TooLarge(format!("more than {STRATEGY_LIMIT} strategies")));
        }
    }
    let better = |a: &BigRational, b: &BigRational| match direction {
        Direction::Max => a > b,
        Direction::Min => a < b,
    };
    let shards = SHARDS.min(total);
    let results = par::map_range(exec, shards as usize, |k| -> Result<Option<BigRational>, EngineError> {
        let lo = total * k as u64 / shards;
        let hi = total * (k as u64 + 1) / shards;
        let mut best: Option<BigRational> = None;
        let mut digits = vec![0usize; radix.len()];
        for idx in lo..hi {
            let mut rest = idx;
            for (d, &r) in digits.iter_mut().zip(&radix) {
                *d = (rest % r as u64) as usize;
                rest /= r as u64;
            }
            let v = value_of(mdp, goal, &active, &digits)?;
            if best.as_ref().is_none_or(|b| better(&v, b)) {
                best = Some(v);
            }
        }
        Ok(best)
    });
    let mut best: Option<BigRational> = None;
    for r in results {
        if let Some(v) = r? {
            if best.as_ref().is_none_or(|b| better(&v, b)) {
                best = Some(v);
            }
        }
    }
    Ok(best.expect("at least one strategy"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdp::MdpBuilder;
    use crate::oracle::exact::to_f64;

    #[test]
    fn picks_better_action() {
        let mut b = MdpBuilder::new(3, 0);
        b.transition(0, "a", &[(1, 0.9), (2, 0.1)]).transition(0, "b", &[(1, 0.5), (2, 0.5)]);
        let m = b.build().unwrap();
        let t = StateSet::from_states(3, [1]);
        let hi = enumerate_strategy_optimum(&m, &Goal::Reach(t.clone()), Direction::Max, Exec::Sequential).unwrap();
        let lo = enumerate_strategy_optimum(&m, &Goal::Reach(t), Direction::Min, Exec::Sequential).unwrap();
        assert_eq!(to_f64(&hi), 0.9);
        assert_eq!(to_f64(&lo), 0.5);
    }

    #[test]
    fn persistence_needs_closed_component() {
        // 0 -stay-> 0, 0 -go-> 1 <-> 2; B = {0, 1}
        let mut b = MdpBuilder::new(3, 0);
        b.transition(0, "stay", &[(0, 1.0)]).transition(0, "go", &[(1, 1.0)]);
        b.transition(1, "stay", &[(2, 1.0)]).transition(2, "stay", &[(1, 1.0)]);
        let m = b.build().unwrap();
        let bset = StateSet::from_states(3, [0, 1]);
        let hi = enumerate_strategy_optimum(&m, &Goal::Persist(bset.clone()), Direction::Max, Exec::Sequential).unwrap();
        let lo = enumerate_strategy_optimum(&m, &Goal::Persist(bset), Direction::Min, Exec::Sequential).unwrap();
        assert_eq!(to_f64(&hi), 1.0);
        assert_eq!(to_f64(&lo), 0.0);
    }

    #[test]
    fn deadlock_in_b_is_accepting() {
        let mut b = MdpBuilder::new(2, 0);
        b.transition(0, "a", &[(1, 1.0)]);
        let m = b.build().unwrap();
        let v = enumerate_strategy_optimum(&m, &Goal::Persist(StateSet::from_states(2, [1])), Direction::Max, Exec::Sequential).unwrap();
        assert_eq!(to_f64(&v), 1.0);
    }
}
