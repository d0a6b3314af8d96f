//! Entry points: solve an objective (value vector plus strategy) or check a
//! single query.

use super::mec::mec_decomposition;
use super::persistence::union_of;
use super::strategy::{max_strategy, mec_choices, min_strategy};
use super::value_iter::{bounded_until_values, next_values, ReachProblem};
use super::{eval_state_formula, Direction, EngineError, PathFormula, Query, SolveOptions, StrategyMap, ValueVector};
use crate::mdp::{Mdp, StateId, StateSet};

/// Optimal values of an objective together with a strategy attaining them.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub values: ValueVector,
    pub strategy: StrategyMap,
    /// States whose optimal value is exactly one, decided by graph analysis.
    pub sure: StateSet,
}

/// Solves `direction [ path ]` from `root` for `F Φ` and `F G Φ` paths.
pub fn solve_objective(
    mdp: &Mdp,
    root: StateId,
    direction: Direction,
    path: &PathFormula,
    opts: &SolveOptions,
) -> Result<Solution, EngineError> {
    let all = StateSet::full(mdp.num_states());
    match path {
        PathFormula::Eventually(f) => {
            let target = eval_state_formula(mdp, f)?.states;
            let problem = ReachProblem::new(mdp, root, direction, &all, &target)?;
            let values = problem.solve(opts)?;
            let strategy = match direction {
                Direction::Max => {
                    let fixed = mec_choices(mdp, &mec_decomposition(mdp, &target), None);
                    max_strategy(mdp, &values, &target, problem.yes(), &|s| fixed[s].or_else(|| first(mdp, s)))
                }
                Direction::Min => min_strategy(mdp, &values, &target, problem.no()),
            };
            Ok(Solution { values, strategy, sure: problem.yes().clone() })
        }
        PathFormula::EventuallyAlways(f) => {
            let b = eval_state_formula(mdp, f)?.states;
            match direction {
                Direction::Max => {
                    let mecs = mec_decomposition(mdp, &b);
                    let t = union_of(mdp.num_states(), &mecs);
                    let problem = ReachProblem::new(mdp, root, Direction::Max, &all, &t)?;
                    let values = problem.solve(opts)?;
                    let fixed = mec_choices(mdp, &mecs, None);
                    let strategy = max_strategy(mdp, &values, &t, problem.yes(), &|s| fixed[s]);
                    Ok(Solution { values, strategy, sure: problem.yes().clone() })
                }
                Direction::Min => {
                    // 1 - Pmax [ F U ] with U the end components that can visit !B forever
                    let not_b = b.complement();
                    let bad: Vec<_> =
                        mec_decomposition(mdp, &all).into_iter().filter(|m| m.states.iter().any(|&s| not_b.contains(s))).collect();
                    let u = union_of(mdp.num_states(), &bad);
                    let problem = ReachProblem::new(mdp, root, Direction::Max, &all, &u)?;
                    let escape = problem.solve(opts)?;
                    let fixed = mec_choices(mdp, &bad, Some(&not_b));
                    let strategy = max_strategy(mdp, &escape, &u, problem.yes(), &|s| fixed[s]);
                    let values = escape.map_values(|v| 1.0 - v);
                    Ok(Solution { values, strategy, sure: problem.no().clone() })
                }
            }
        }
        other => Err(EngineError::Unsupported(format!("objective path formula `{other}`; expected F or F G"))),
    }
}

fn first(mdp: &Mdp, s: StateId) -> Option<usize> {
    mdp.choices(s).first().map(|c| c.action)
}

/// Outcome of [`check_query`].
#[derive(Debug, Clone, PartialEq)]
pub struct QueryResult {
    pub values: ValueVector,
    /// Value at the initial state.
    pub value: f64,
    /// Whether the value lies in the query's bound, for bounded queries.
    pub sat: Option<bool>,
}

/// Checks one query at the model's initial state.
pub fn check_query(mdp: &Mdp, query: &Query, opts: &SolveOptions) -> Result<QueryResult, EngineError> {
    let root = mdp.initial();
    let all = StateSet::full(mdp.num_states());
    let dir = query.direction;
    let set = |f| eval_state_formula(mdp, f).map(|t| t.states);
    let values = match &query.path {
        PathFormula::Next(f) => next_values(mdp, root, dir, &set(f)?)?,
        PathFormula::Until(a, b) => ReachProblem::new(mdp, root, dir, &set(a)?, &set(b)?)?.solve(opts)?,
        PathFormula::BoundedUntil(a, b, k) => bounded_until_values(mdp, root, dir, &set(a)?, &set(b)?, *k, opts.exec)?,
        PathFormula::Eventually(f) => ReachProblem::new(mdp, root, dir, &all, &set(f)?)?.solve(opts)?,
        PathFormula::Always(f) => {
            // G f = !F !f under the dual optimisation
            let bad = set(f)?.complement();
            ReachProblem::new(mdp, root, dir.dual(), &all, &bad)?.solve(opts)?.map_values(|v| 1.0 - v)
        }
        PathFormula::EventuallyAlways(_) => solve_objective(mdp, root, dir, &query.path, opts)?.values,
    };
    let value = values.at(root);
    let sat = query.bound.map(|j| j.contains(value));
    Ok(QueryResult { values, value, sat })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdp::MdpBuilder;
    use crate::pctl::{Interval, StateFormula};

    // 0 -a-> {1 .9, 2 .1}; 1 "goal"; 1 and 2 absorbing
    fn toy() -> Mdp {
        let mut b = MdpBuilder::new(3, 0);
        b.prop("goal").label(1, "goal");
        b.transition(0, "a", &[(1, 0.9), (2, 0.1)]);
        b.transition(1, "a", &[(1, 1.0)]).transition(2, "a", &[(2, 1.0)]);
        b.build().unwrap()
    }

    fn query(direction: Direction, bound: Option<Interval>, path: PathFormula) -> Query {
        Query { direction, bound, path }
    }

    #[test]
    fn bounded_query_sat() {
        let m = toy();
        let q = query(Direction::Max, Some(Interval::below(0.95)), PathFormula::Eventually(StateFormula::atom("goal")));
        let r = check_query(&m, &q, &SolveOptions::default()).unwrap();
        assert_eq!(r.value, 0.9);
        assert_eq!(r.sat, Some(true));
    }

    #[test]
    fn always_is_dual() {
        let m = toy();
        let q = query(Direction::Max, None, PathFormula::Always(StateFormula::negation(StateFormula::atom("goal"))));
        let r = check_query(&m, &q, &SolveOptions::default()).unwrap();
        assert!((r.value - 0.1).abs() < 1e-12);
    }

    #[test]
    fn min_persistence_can_cycle_out_of_b() {
        // 0 (B) <-> 1 (not B) via "go"; 0 also has "stay". Pmin[F G B] = 0 by cycling.
        let mut b = MdpBuilder::new(2, 0);
        b.prop("b").label(0, "b");
        b.transition(0, "stay", &[(0, 1.0)]).transition(0, "go", &[(1, 1.0)]);
        b.transition(1, "go", &[(0, 1.0)]);
        let m = b.build().unwrap();
        let path = PathFormula::EventuallyAlways(StateFormula::atom("b"));
        let opts = SolveOptions::default();
        let min = solve_objective(&m, 0, Direction::Min, &path, &opts).unwrap();
        assert_eq!(min.values.at(0), 0.0);
        assert_eq!(min.strategy.get(0), m.action_id("go"));
        let max = solve_objective(&m, 0, Direction::Max, &path, &opts).unwrap();
        assert_eq!(max.values.at(0), 1.0);
        assert_eq!(max.strategy.get(0), m.action_id("stay"));
        assert!(max.sure.contains(0));
    }

    #[test]
    fn non_objective_path_rejected() {
        let m = toy();
        let path = PathFormula::Next(StateFormula::atom("goal"));
        assert!(matches!(solve_objective(&m, 0, Direction::Max, &path, &SolveOptions::default()), Err(EngineError::Unsupported(_))));
    }
}
