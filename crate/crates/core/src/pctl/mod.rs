//! Quantitative PCTL engine over explicit MDPs.
//!
//! Reachability is solved by qualitative graph precomputation followed by
//! value iteration. Persistence (`F G B`) reduces to reaching the maximal end
//! components that sit inside `B`. Strategies are memoryless and extracted
//! from the converged vectors.

mod dtmc;
mod formula;
mod interval;
mod mec;
mod persistence;
mod precompute;
mod solve;
mod strategy;
mod value_iter;

use thiserror::Error;

use crate::par::Exec;

pub use dtmc::{bottom_sccs, Dtmc};
pub use formula::{eval_state_formula, Direction, PathFormula, Query, StateFormula, TargetSet};
pub use interval::{boundary_warning, verify_context, Bound, Interval};
pub use mec::{mec_decomposition, Mec};
pub use persistence::{accepting_states, persistence_values, persistence_values_from};
pub use precompute::{prob0_max, prob0_min, prob1_max, prob1_min};
pub use solve::{check_query, solve_objective, QueryResult, Solution};
pub use strategy::{extract_strategy, StrategyMap};
pub use value_iter::{
    bounded_until_values, max_reach_values, min_reach_values, next_values, reach_values_from, ReachIteration, ReachProblem, ValueVector,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("unknown proposition \"{0}\"")]
    UnknownProposition(String),
    #[error("value iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("invalid state index {0}")]
    InvalidState(usize),
    #[error("state {0} is outside the value vector's domain")]
    OutsideDomain(usize),
    #[error("state {state} has {choices} enabled actions; expected a Markov chain")]
    NotADtmc { state: usize, choices: usize },
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("singular linear system")]
    Singular,
}

impl EngineError {
    pub fn is_input_error(&self) -> bool {
        matches!(self, EngineError::UnknownProposition(_) | EngineError::InvalidState(_) | EngineError::Unsupported(_))
    }
}

/// Numerical settings shared by every solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Stop when the max-norm change between iterates drops below this.
    pub epsilon: f64,
    pub max_iter: usize,
    pub exec: Exec,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { epsilon: 1e-6, max_iter: 1_000_000, exec: Exec::default() }
    }
}
