use crate::captl::Requirement;
use crate::mdp::{Mdp, StateId, StateSet};
use crate::par;
use crate::pctl::{eval_state_formula, solve_objective, Direction, EngineError, Solution, SolveOptions, StrategyMap, ValueVector};

/// Everything synthesis needs about one objective, solved from the model's
/// initial state.
#[derive(Debug, Clone)]
pub struct ObjectiveSolution {
    pub objective: usize,
    pub solution: Solution,
    /// `Pmax` of the objective's path formula, which its contexts bound.
    /// Only stored separately for `Pmin` objectives with contexts.
    context_values: Option<ValueVector>,
    /// States satisfying the objective's state formula.
    pub formula_states: StateSet,
}

impl ObjectiveSolution {
    pub fn values(&self) -> &ValueVector {
        &self.solution.values
    }

    pub fn strategy(&self) -> &StrategyMap {
        &self.solution.strategy
    }

    /// The value contexts leaving this objective are checked against.
    pub fn context_value(&self, s: StateId) -> f64 {
        self.context_values.as_ref().unwrap_or(&self.solution.values).at(s)
    }

    pub fn context_vector(&self) -> &ValueVector {
        self.context_values.as_ref().unwrap_or(&self.solution.values)
    }
}

fn solve_one(mdp: &Mdp, req: &Requirement, qi: usize, opts: &SolveOptions) -> Result<ObjectiveSolution, EngineError> {
    let q = &req.objectives[qi];
    let root = mdp.initial();
    let solution = solve_objective(mdp, root, q.direction, &q.path, opts)?.with_objective(&q.id);
    let has_contexts = req.contexts.iter().any(|w| w.source == q.id);
    let context_values = if q.direction == Direction::Min && has_contexts {
        Some(solve_objective(mdp, root, Direction::Max, &q.path, opts)?.values.with_objective(&q.id))
    } else {
        None
    };
    let formula_states = eval_state_formula(mdp, q.formula())?.states;
    Ok(ObjectiveSolution { objective: qi, solution, context_values, formula_states })
}

/// Solves the given objectives (by declaration index). With a parallel
/// executor the objectives run concurrently; results come back in input
/// order either way.
pub fn solve_objectives(
    mdp: &Mdp,
    req: &Requirement,
    objectives: &[usize],
    opts: &SolveOptions,
) -> Result<Vec<ObjectiveSolution>, EngineError> {
    // objective-level fan-out; the inner loops stay sequential to avoid nesting pools
    let inner = SolveOptions { exec: if objectives.len() > 1 { par::Exec::Sequential } else { opts.exec }, ..*opts };
    par::map_range(opts.exec, objectives.len(), |i| solve_one(mdp, req, objectives[i], &inner)).into_iter().collect()
}

impl Solution {
    pub(crate) fn with_objective(mut self, id: &str) -> Self {
        self.values = self.values.with_objective(id);
        self
    }
}
