//! `Pmax [ F G B ]` as maximal reachability of the end components inside `B`.
//!
//! From any state of an end component contained in `B` the component's
//! retained actions keep the play in `B` forever, and every play that
//! eventually stays in `B` ends up in such a component almost surely.

use super::mec::{mec_decomposition, Mec};
use super::value_iter::reach_values_from;
use super::{Direction, EngineError, SolveOptions, ValueVector};
use crate::mdp::{Mdp, StateId, StateSet};

pub(crate) fn accepting_mecs(mdp: &Mdp, b: &StateSet) -> Vec<Mec> {
    mec_decomposition(mdp, b)
}

/// Union of the maximal end components contained in `b`.
pub fn accepting_states(mdp: &Mdp, b: &StateSet) -> StateSet {
    union_of(mdp.num_states(), &accepting_mecs(mdp, b))
}

pub(crate) fn union_of(n: usize, mecs: &[Mec]) -> StateSet {
    StateSet::from_states(n, mecs.iter().flat_map(|m| m.states.iter().copied()))
}

/// `Pmax [ F G b ]` on the states reachable from the initial state.
pub fn persistence_values(mdp: &Mdp, b: &StateSet, opts: &SolveOptions) -> Result<ValueVector, EngineError> {
    persistence_values_from(mdp, mdp.initial(), b, opts)
}

/// `Pmax [ F G b ]` on the states reachable from `root`.
pub fn persistence_values_from(mdp: &Mdp, root: StateId, b: &StateSet, opts: &SolveOptions) -> Result<ValueVector, EngineError> {
    mdp.check_state(root).map_err(|_| EngineError::InvalidState(root))?;
    let t = accepting_states(mdp, b);
    reach_values_from(mdp, root, Direction::Max, &t, opts)
}
