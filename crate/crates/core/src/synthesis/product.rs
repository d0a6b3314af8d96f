//! Turn-based product of model, requirement and strategy profile.
//!
//! A product state is `(s, q, turn)`. In turn two the requirement moves:
//! if a context of `q` fires at `s` the objective switches (tag `w`),
//! otherwise control passes to the model (tag `τ`). In turn one the model
//! plays `σ_q(s)` and hands back to turn two. Every state has exactly one
//! outgoing tag, so the product is a Markov chain.

use std::collections::{HashMap, VecDeque};

use super::{Partition, SynthError};
use crate::captl::Requirement;
use crate::mdp::{ActionId, Mdp, StateId};
use crate::pctl::{Dtmc, StrategyMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Turn {
    /// The model moves.
    One,
    /// The requirement moves.
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tag {
    Action(ActionId),
    /// Context, by declaration index.
    Context(usize),
    Tau,
    /// A deadlocked model state idles back to turn two.
    Idle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProductState {
    pub state: StateId,
    pub objective: usize,
    pub turn: Turn,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductEdge {
    pub tag: Tag,
    pub to: usize,
    pub prob: f64,
}

/// Product restricted to the states reachable from `(s0, q0, Two)`, which is
/// state 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductDtmc {
    pub states: Vec<ProductState>,
    pub edges: Vec<Vec<ProductEdge>>,
    index: HashMap<ProductState, usize>,
}

impl ProductDtmc {
    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn index_of(&self, v: &ProductState) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn num_transitions(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    /// Distinct tags leaving `v`.
    pub fn tags(&self, v: usize) -> Vec<Tag> {
        let mut out: Vec<Tag> = Vec::new();
        for e in &self.edges[v] {
            if !out.contains(&e.tag) {
                out.push(e.tag);
            }
        }
        out
    }

    /// Number of (state, enabled tag) pairs.
    pub fn num_choices(&self) -> usize {
        (0..self.num_states()).map(|v| self.tags(v).len()).sum()
    }

    /// Checks that every state enables exactly one tag.
    pub fn check_single_tag(&self) -> Result<(), SynthError> {
        for v in 0..self.num_states() {
            let k = self.tags(v).len();
            if k != 1 {
                return Err(SynthError::NotADtmc { state: v, tags: k });
            }
        }
        Ok(())
    }

    pub fn to_dtmc(&self) -> Result<Dtmc, SynthError> {
        self.check_single_tag()?;
        let rows = self.edges.iter().map(|es| es.iter().map(|e| (e.to, e.prob)).collect()).collect();
        Ok(Dtmc::new(0, rows))
    }
}

/// Builds the product over the objectives explored by `partition`, each
/// playing its own optimal strategy.
pub fn build_product(mdp: &Mdp, req: &Requirement, partition: &Partition) -> Result<ProductDtmc, SynthError> {
    let q0 = req.objective_index(&req.initial).expect("validated initial objective");
    let start = ProductState { state: mdp.initial(), objective: q0, turn: Turn::Two };
    let mut states = vec![start];
    let mut index = HashMap::from([(start, 0usize)]);
    let mut edges: Vec<Vec<ProductEdge>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);

    while let Some(v) = queue.pop_front() {
        let ProductState { state: s, objective: qi, turn } = states[v];
        let missing = || SynthError::MissingStrategy { objective: req.objectives[qi].id.clone(), state: s };
        let mut out: Vec<(Tag, ProductState, f64)> = Vec::new();
        match turn {
            Turn::Two => {
                let blocks = partition.get(qi).ok_or_else(missing)?;
                match blocks.switch[s] {
                    Some(wi) => {
                        let ti = req.objective_index(&req.contexts[wi].target).expect("validated context target");
                        out.push((Tag::Context(wi), ProductState { state: s, objective: ti, turn: Turn::Two }, 1.0));
                    }
                    None => out.push((Tag::Tau, ProductState { state: s, objective: qi, turn: Turn::One }, 1.0)),
                }
            }
            Turn::One => {
                let strategy: &StrategyMap = partition.get(qi).ok_or_else(missing)?.solved.strategy();
                match strategy.choice(mdp, s) {
                    Some(c) => {
                        for &(t, p) in &c.branches {
                            out.push((Tag::Action(c.action), ProductState { state: t, objective: qi, turn: Turn::Two }, p));
                        }
                    }
                    None if mdp.is_deadlock(s) => {
                        out.push((Tag::Idle, ProductState { state: s, objective: qi, turn: Turn::Two }, 1.0));
                    }
                    None => return Err(missing()),
                }
            }
        }
        let row = out
            .into_iter()
            .map(|(tag, w, prob)| {
                let to = *index.entry(w).or_insert_with(|| {
                    states.push(w);
                    queue.push_back(states.len() - 1);
                    states.len() - 1
                });
                ProductEdge { tag, to, prob }
            })
            .collect();
        if edges.len() <= v {
            edges.resize(v + 1, Vec::new());
        }
        edges[v] = row;
    }
    edges.resize(states.len(), Vec::new());
    Ok(ProductDtmc { states, edges, index })
}
