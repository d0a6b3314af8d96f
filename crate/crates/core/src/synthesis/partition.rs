//! Partitioning the reachable states per objective by the context that
//! fires there.

use super::objective::{solve_objectives, ObjectiveSolution};
use super::SynthError;
use crate::captl::{firing_contexts, validate_persistence, Requirement, RequirementError};
use crate::mdp::{Mdp, StateId, StateSet};
use crate::pctl::SolveOptions;

/// Blocks of one explored objective `q`: `blocks[q']` holds the reachable
/// states where the system switches from `q` to `q'`, and `blocks[q]` the
/// states where `q` stays active.
#[derive(Debug, Clone)]
pub struct ObjectiveBlocks {
    pub objective: usize,
    pub solved: ObjectiveSolution,
    pub blocks: Vec<StateSet>,
    /// Context (by declaration index) firing at each state, if any.
    pub switch: Vec<Option<usize>>,
}

impl ObjectiveBlocks {
    /// Objective that is active after the switching step at `s`.
    pub fn block_of(&self, s: StateId) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(s))
    }
}

#[derive(Debug, Clone)]
pub struct Partition {
    /// States reachable from the initial state.
    pub reach: StateSet,
    /// Explored objectives in exploration order.
    pub explored: Vec<ObjectiveBlocks>,
    pub warnings: Vec<String>,
}

impl Partition {
    pub fn get(&self, objective: usize) -> Option<&ObjectiveBlocks> {
        self.explored.iter().find(|b| b.objective == objective)
    }
}

/// Explores objectives breadth-first from the initial one, solving each
/// once and splitting the reachable states by firing context. Objectives of
/// one breadth-first layer are solved together (concurrently with a
/// parallel executor).
pub fn partition_states(mdp: &Mdp, req: &Requirement, opts: &SolveOptions) -> Result<Partition, SynthError> {
    req.validate()?;
    let violations = validate_persistence(req);
    if !violations.is_empty() {
        return Err(RequirementError::NotPersistence(violations).into());
    }
    partition_unchecked(mdp, req, opts)
}

pub(crate) fn partition_unchecked(mdp: &Mdp, req: &Requirement, opts: &SolveOptions) -> Result<Partition, SynthError> {
    let nq = req.objectives.len();
    let q0 = req.objective_index(&req.initial).expect("validated initial objective");
    let mut queued = vec![false; nq];
    queued[q0] = true;
    let mut layer = vec![q0];
    let mut explored = Vec::new();
    let mut warnings = Vec::new();
    let mut reach = None;

    while !layer.is_empty() {
        let solved = solve_objectives(mdp, req, &layer, opts)?;
        let mut next = Vec::new();
        for sol in solved {
            let qi = sol.objective;
            let q = &req.objectives[qi];
            let domain = sol.values().domain().clone();
            let mut blocks = vec![StateSet::empty(mdp.num_states()); nq];
            let mut switch = vec![None; mdp.num_states()];
            for s in domain.iter() {
                let fired = firing_contexts(req, &q.id, sol.context_value(s));
                match fired.first() {
                    Some(w) => {
                        if fired.len() > 1 {
                            warnings.push(format!("objective {} state {s}: {} contexts hold; taking {}", q.id, fired.len(), w.id));
                        }
                        let ti = req.objective_index(&w.target).expect("validated context target");
                        blocks[ti].insert(s);
                        switch[s] = req.contexts.iter().position(|c| c.id == w.id);
                    }
                    None => {
                        blocks[qi].insert(s);
                    }
                }
            }
            for (ti, b) in blocks.iter().enumerate() {
                if ti != qi && !b.is_empty() && !queued[ti] {
                    queued[ti] = true;
                    next.push(ti);
                }
            }
            reach.get_or_insert(domain);
            explored.push(ObjectiveBlocks { objective: qi, solved: sol, blocks, switch });
        }
        layer = next;
    }
    Ok(Partition { reach: reach.expect("initial objective explored"), explored, warnings })
}
