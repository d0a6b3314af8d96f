//! The chain induced by running a protocol on the model.

use std::collections::{HashMap, VecDeque};

use super::{Decision, Protocol, SynthError};
use crate::captl::Requirement;
use crate::mdp::{Mdp, StateId, StateSet};
use crate::pctl::Dtmc;

/// Markov chain over (objective, state) pairs reachable from
/// (initial objective, initial state). Pair `i` of `pairs` is chain state `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct InducedChain {
    pub pairs: Vec<(usize, StateId)>,
    pub chain: Dtmc,
    index: HashMap<(usize, StateId), usize>,
}

impl InducedChain {
    pub fn index_of(&self, objective: usize, s: StateId) -> Option<usize> {
        self.index.get(&(objective, s)).copied()
    }

    pub fn num_states(&self) -> usize {
        self.pairs.len()
    }

    /// Chain states whose pair satisfies `pred`.
    pub fn states_where(&self, pred: impl Fn(usize, StateId) -> bool) -> StateSet {
        StateSet::from_states(self.pairs.len(), (0..self.pairs.len()).filter(|&i| pred(self.pairs[i].0, self.pairs[i].1)))
    }
}

/// Composes `mdp` with `protocol`: an action entry moves the model state
/// with the model's distribution, a switch entry changes the objective with
/// probability one, and a deadlocked model state loops on itself.
pub fn compose_protocol(mdp: &Mdp, req: &Requirement, protocol: &Protocol) -> Result<InducedChain, SynthError> {
    let table = protocol.table()?;
    let q0 =
        req.objective_index(&req.initial).ok_or_else(|| SynthError::Incompatible(format!("unknown initial objective {}", req.initial)))?;
    let mut pairs = vec![(q0, mdp.initial())];
    let mut index = HashMap::from([((q0, mdp.initial()), 0)]);
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    let mut intern = |key: (usize, StateId), pairs: &mut Vec<(usize, StateId)>, queue: &mut VecDeque<usize>| {
        *index.entry(key).or_insert_with(|| {
            pairs.push(key);
            queue.push_back(pairs.len() - 1);
            pairs.len() - 1
        })
    };
    while let Some(i) = queue.pop_front() {
        let (qi, s) = pairs[i];
        let q = &req.objectives[qi].id;
        let row = match table.get(&(q.as_str(), s)) {
            Some(Decision::Action { action }) => {
                let a = mdp.action_id(action).ok_or_else(|| SynthError::Incompatible(format!("unknown action {action} at ({q}, {s})")))?;
                let c = mdp.choice(s, a).ok_or_else(|| SynthError::Incompatible(format!("action {action} not enabled at state {s}")))?;
                c.branches.iter().map(|&(t, p)| (intern((qi, t), &mut pairs, &mut queue), p)).collect()
            }
            Some(Decision::Switch { context, target }) => {
                let w = req
                    .context(context)
                    .filter(|w| w.source == *q && w.target == *target)
                    .ok_or_else(|| SynthError::Incompatible(format!("no context {context} from {q} to {target}")))?;
                let ti = req.objective_index(&w.target).expect("validated context target");
                vec![(intern((ti, s), &mut pairs, &mut queue), 1.0)]
            }
            None if mdp.is_deadlock(s) => vec![(i, 1.0)],
            None => return Err(SynthError::Incompatible(format!("no decision for objective {q} at state {s}"))),
        };
        if rows.len() <= i {
            rows.resize(i + 1, Vec::new());
        }
        rows[i] = row;
    }
    rows.resize(pairs.len(), Vec::new());
    Ok(InducedChain { pairs, chain: Dtmc::new(0, rows), index })
}
