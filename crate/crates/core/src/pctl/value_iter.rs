//! Value iteration for optimal reachability probabilities.
//!
//! Iteration is Jacobi-style (every backup reads the previous iterate), so
//! the sequential and the parallel execution produce bit-identical results.

use super::precompute::{prob0_max_with, prob0_min_with, prob1_max_with, prob1_min_with, Predecessors};
use super::{Direction, EngineError, SolveOptions};
use crate::mdp::{reach, Mdp, StateId, StateSet};
use crate::par;

/// Per-state optimal probabilities for one query, defined on the states
/// reachable from `root`.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueVector {
    values: Vec<f64>,
    domain: StateSet,
    root: StateId,
    pub objective: String,
    pub epsilon: f64,
    pub iterations: usize,
}

impl ValueVector {
    pub(crate) fn new(values: Vec<f64>, domain: StateSet, root: StateId, epsilon: f64, iterations: usize) -> Self {
        ValueVector { values, domain, root, objective: String::new(), epsilon, iterations }
    }

    pub fn with_objective(mut self, id: impl Into<String>) -> Self {
        self.objective = id.into();
        self
    }

    /// Value at `s`, or `None` outside the domain.
    pub fn get(&self, s: StateId) -> Option<f64> {
        self.domain.contains(s).then(|| self.values[s])
    }

    /// Value at `s`. Panics outside the domain.
    pub fn at(&self, s: StateId) -> f64 {
        self.get(s).unwrap_or_else(|| panic!("state {s} outside value vector domain"))
    }

    pub fn root(&self) -> StateId {
        self.root
    }

    pub fn domain(&self) -> &StateSet {
        &self.domain
    }

    /// Raw storage indexed by state; zero outside the domain.
    pub fn raw(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn map_values(mut self, f: impl Fn(f64) -> f64) -> Self {
        for s in self.domain.iter() {
            self.values[s] = f(self.values[s]);
        }
        self
    }
}

/// A reachability problem `allowed U target` restricted to the states
/// reachable from `root`, with its qualitative precomputation done.
pub struct ReachProblem<'a> {
    pub(crate) mdp: &'a Mdp,
    pub(crate) direction: Direction,
    pub(crate) root: StateId,
    pub(crate) domain: StateSet,
    /// Optimal value exactly one.
    pub(crate) yes: StateSet,
    /// Optimal value exactly zero.
    pub(crate) no: StateSet,
    maybe: Vec<StateId>,
}

impl<'a> ReachProblem<'a> {
    pub fn new(mdp: &'a Mdp, root: StateId, direction: Direction, allowed: &StateSet, target: &StateSet) -> Result<Self, EngineError> {
        let domain = reach(mdp, root).map_err(|_| EngineError::InvalidState(root))?;
        let target = target.intersection(&domain);
        let allowed = allowed.intersection(&domain);
        let preds = Predecessors::new(mdp);
        let (yes, no) = match direction {
            Direction::Max => {
                let yes = prob1_max_with(mdp, &preds, &allowed, &target).intersection(&domain);
                let no = prob0_max_with(mdp, &preds, &allowed, &target).intersection(&domain);
                (yes, no)
            }
            Direction::Min => {
                let no = prob0_min_with(mdp, &preds, &allowed, &target).intersection(&domain);
                let yes = prob1_min_with(mdp, &preds, &allowed, &target).intersection(&domain);
                (yes, no)
            }
        };
        let maybe = domain.iter().filter(|&s| !yes.contains(s) && !no.contains(s)).collect();
        Ok(ReachProblem { mdp, direction, root, domain, yes, no, maybe })
    }

    pub fn start(&self) -> ReachIteration<'_, 'a> {
        let mut x = vec![0.0; self.mdp.num_states()];
        for s in self.yes.iter() {
            x[s] = 1.0;
        }
        ReachIteration { problem: self, x, iterations: 0 }
    }

    pub fn domain(&self) -> &StateSet {
        &self.domain
    }

    pub fn yes(&self) -> &StateSet {
        &self.yes
    }

    pub fn no(&self) -> &StateSet {
        &self.no
    }

    /// Runs value iteration to convergence.
    pub fn solve(&self, opts: &SolveOptions) -> Result<ValueVector, EngineError> {
        let mut it = self.start();
        loop {
            if it.iterations >= opts.max_iter {
                let residual = it.step(opts.exec);
                return Err(EngineError::NonConvergence { iterations: opts.max_iter, residual });
            }
            let delta = it.step(opts.exec);
            if delta < opts.epsilon {
                break;
            }
        }
        Ok(it.finish(opts.epsilon))
    }
}

/// The iterate sequence of a [`ReachProblem`], starting from the vector that
/// is one on the precomputed yes-states and zero elsewhere.
pub struct ReachIteration<'p, 'a> {
    problem: &'p ReachProblem<'a>,
    x: Vec<f64>,
    iterations: usize,
}

impl ReachIteration<'_, '_> {
    /// One Bellman backup over the undecided states; returns the max-norm change.
    pub fn step(&mut self, exec: par::Exec) -> f64 {
        let p = self.problem;
        let x = &self.x;
        let updated = par::map_slice(exec, &p.maybe, |&s| backup(p.mdp, p.direction, x, s));
        let mut delta: f64 = 0.0;
        for (&s, v) in p.maybe.iter().zip(updated) {
            delta = delta.max((v - self.x[s]).abs());
            self.x[s] = v;
        }
        self.iterations += 1;
        delta
    }

    pub fn values(&self) -> &[f64] {
        &self.x
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn finish(mut self, epsilon: f64) -> ValueVector {
        for v in &mut self.x {
            *v = v.clamp(0.0, 1.0);
        }
        ValueVector::new(self.x, self.problem.domain.clone(), self.problem.root, epsilon, self.iterations)
    }
}

/// Optimal one-step expectation of `x` at `s`. Deadlocks keep value zero.
pub(crate) fn backup(mdp: &Mdp, dir: Direction, x: &[f64], s: StateId) -> f64 {
    let mut best: Option<f64> = None;
    for c in mdp.choices(s) {
        let v: f64 = c.branches.iter().map(|&(t, p)| p * x[t]).sum();
        best = Some(match (best, dir) {
            (None, _) => v,
            (Some(b), Direction::Max) => b.max(v),
            (Some(b), Direction::Min) => b.min(v),
        });
    }
    best.unwrap_or(0.0)
}

/// `Pmax [ F target ]` from every state reachable from the initial state.
pub fn max_reach_values(mdp: &Mdp, target: &StateSet, opts: &SolveOptions) -> Result<ValueVector, EngineError> {
    reach_values_from(mdp, mdp.initial(), Direction::Max, target, opts)
}

/// `Pmin [ F target ]` from every state reachable from the initial state.
pub fn min_reach_values(mdp: &Mdp, target: &StateSet, opts: &SolveOptions) -> Result<ValueVector, EngineError> {
    reach_values_from(mdp, mdp.initial(), Direction::Min, target, opts)
}

pub fn reach_values_from(
    mdp: &Mdp,
    root: StateId,
    dir: Direction,
    target: &StateSet,
    opts: &SolveOptions,
) -> Result<ValueVector, EngineError> {
    let all = StateSet::full(mdp.num_states());
    ReachProblem::new(mdp, root, dir, &all, target)?.solve(opts)
}

/// `allowed U<=k target`: exactly `k` backups from the indicator of the target.
pub fn bounded_until_values(
    mdp: &Mdp,
    root: StateId,
    dir: Direction,
    allowed: &StateSet,
    target: &StateSet,
    k: u32,
    exec: par::Exec,
) -> Result<ValueVector, EngineError> {
    let domain = reach(mdp, root).map_err(|_| EngineError::InvalidState(root))?;
    let mut x = vec![0.0; mdp.num_states()];
    for s in target.intersection(&domain).iter() {
        x[s] = 1.0;
    }
    let active: Vec<StateId> = domain.iter().filter(|&s| allowed.contains(s) && !target.contains(s)).collect();
    for _ in 0..k {
        let updated = par::map_slice(exec, &active, |&s| backup(mdp, dir, &x, s));
        for (&s, v) in active.iter().zip(updated) {
            x[s] = v;
        }
    }
    Ok(ValueVector::new(x, domain, root, 0.0, k as usize))
}

/// `X target`: one backup of the target indicator.
pub fn next_values(mdp: &Mdp, root: StateId, dir: Direction, target: &StateSet) -> Result<ValueVector, EngineError> {
    let domain = reach(mdp, root).map_err(|_| EngineError::InvalidState(root))?;
    let ind: Vec<f64> = (0..mdp.num_states()).map(|s| if target.contains(s) { 1.0 } else { 0.0 }).collect();
    let mut x = vec![0.0; mdp.num_states()];
    for s in domain.iter() {
        x[s] = backup(mdp, dir, &ind, s);
    }
    Ok(ValueVector::new(x, domain, root, 0.0, 1))
}
