//! Per-state synthesis: explore (objective, state) pairs from the initial
//! pair, switch objectives whenever a context fires, otherwise play the
//! objective's locally optimal action and explore its successors.

use std::collections::VecDeque;

use super::objective::{solve_objectives, ObjectiveSolution};
use super::{compose_protocol, Algorithm, Decision, Protocol, ProtocolEntry, SynthError};
use crate::captl::{firing_contexts, Requirement};
use crate::mdp::{Mdp, StateSet};
use crate::pctl::{boundary_warning, SolveOptions};

#[derive(Debug, Clone)]
pub struct PctlOutcome {
    pub protocol: Protocol,
    /// Objectives that became active, by declaration index, in the order
    /// they were first reached.
    pub explored: Vec<usize>,
    /// Per objective, the states where it holds with probability one. A
    /// run of the induced chain is accepted once it reaches such a pair.
    pub sure: Vec<StateSet>,
    pub warnings: Vec<String>,
}

/// Synthesises a protocol for a (possibly general) requirement.
///
/// Each objective is solved once from the initial state; the optimal
/// strategy from the initial state is also optimal from every state it can
/// reach, so the local synthesis at a pair reads that strategy instead of
/// re-solving. The satisfaction probability is the probability, in the
/// induced chain, of reaching a pair whose objective is met with
/// probability exactly one.
pub fn synth_pctl(mdp: &Mdp, req: &Requirement, opts: &SolveOptions) -> Result<PctlOutcome, SynthError> {
    req.validate()?;
    let nq = req.objectives.len();
    let n = mdp.num_states();
    let q0 = req.objective_index(&req.initial).expect("validated initial objective");
    let s0 = mdp.initial();

    let mut solved: Vec<Option<ObjectiveSolution>> = vec![None; nq];
    let solve = |qi: usize, solved: &mut Vec<Option<ObjectiveSolution>>| -> Result<(), SynthError> {
        if solved[qi].is_none() {
            solved[qi] = solve_objectives(mdp, req, &[qi], opts)?.pop();
        }
        Ok(())
    };

    let mut seen: Vec<StateSet> = vec![StateSet::empty(n); nq];
    let mut entries = Vec::new();
    let mut explored = Vec::new();
    let mut warnings = Vec::new();
    // per (objective, state): the objective is satisfied with probability one
    let mut sure_pairs: Vec<StateSet> = vec![StateSet::empty(n); nq];
    let mut queue = VecDeque::from([(q0, s0)]);
    seen[q0].insert(s0);

    'pairs: while let Some((mut qi, s)) = queue.pop_front() {
        loop {
            solve(qi, &mut solved)?;
            if !explored.contains(&qi) {
                explored.push(qi);
            }
            let sol = solved[qi].as_ref().expect("solved above");
            let q = &req.objectives[qi];
            let x = sol.context_value(s);
            for w in req.contexts.iter().filter(|w| w.source == q.id) {
                if let Some(msg) = boundary_warning(x, &w.interval, opts.epsilon) {
                    warnings.push(format!("objective {} state {s}, context {}: {msg}", q.id, w.id));
                }
            }
            let fired = firing_contexts(req, &q.id, x);
            let Some(w) = fired.first() else { break };
            if fired.len() > 1 {
                let ids: Vec<&str> = fired.iter().map(|w| w.id.as_str()).collect();
                warnings.push(format!("objective {} state {s}: contexts {} all hold; taking {}", q.id, ids.join(", "), w.id));
            }
            entries.push(ProtocolEntry {
                objective: q.id.clone(),
                state: s,
                decision: Decision::Switch { context: w.id.clone(), target: w.target.clone() },
            });
            qi = req.objective_index(&w.target).expect("validated context target");
            if !seen[qi].insert(s) {
                continue 'pairs;
            }
        }

        let sol = solved[qi].as_ref().expect("solved above");
        if sol.solution.sure.contains(s) {
            sure_pairs[qi].insert(s);
        }
        let Some(a) = sol.strategy().get(s) else {
            // deadlock: nothing to decide, the state is absorbing
            continue;
        };
        entries.push(ProtocolEntry {
            objective: req.objectives[qi].id.clone(),
            state: s,
            decision: Decision::Action { action: mdp.action_name(a).to_string() },
        });
        for t in mdp.post(s, a).iter() {
            if seen[qi].insert(t) {
                queue.push_back((qi, t));
            }
        }
    }

    let mut protocol = Protocol { algorithm: Algorithm::Pctl, c: 0.0, entries };
    protocol.normalize(req);
    let induced = compose_protocol(mdp, req, &protocol)?;
    let accept = induced.states_where(|qi, s| sure_pairs[qi].contains(s));
    protocol.c = induced.chain.reach_prob(&accept)?;
    Ok(PctlOutcome { protocol, explored, sure: sure_pairs, warnings })
}
