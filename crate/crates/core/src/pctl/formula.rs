use std::fmt;

use super::{EngineError, Interval};
use crate::mdp::{Mdp, StateSet};

/// Propositional state formula.
#[derive(Debug, Clone, PartialEq)]
pub enum StateFormula {
    True,
    Atom(String),
    Not(Box<StateFormula>),
    And(Box<StateFormula>, Box<StateFormula>),
    Or(Box<StateFormula>, Box<StateFormula>),
}

impl StateFormula {
    pub fn atom(name: &str) -> Self {
        StateFormula::Atom(name.to_string())
    }

    pub fn negation(f: StateFormula) -> Self {
        StateFormula::Not(Box::new(f))
    }

    pub fn and(a: StateFormula, b: StateFormula) -> Self {
        StateFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: StateFormula, b: StateFormula) -> Self {
        StateFormula::Or(Box::new(a), Box::new(b))
    }

    /// Conjunction of atoms, left-associated.
    pub fn all_of(atoms: &[&str]) -> Self {
        let mut it = atoms.iter();
        let first = it.next().map_or(StateFormula::True, |a| StateFormula::atom(a));
        it.fold(first, |acc, a| StateFormula::and(acc, StateFormula::atom(a)))
    }

    /// Every proposition name mentioned, in order of first occurrence.
    pub fn atoms(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            StateFormula::True => {}
            StateFormula::Atom(a) => {
                if !out.contains(&a.as_str()) {
                    out.push(a);
                }
            }
            StateFormula::Not(f) => f.collect_atoms(out),
            StateFormula::And(a, b) | StateFormula::Or(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }
}

impl fmt::Display for StateFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateFormula::True => write!(f, "true"),
            StateFormula::Atom(a) => write!(f, "\"{a}\""),
            StateFormula::Not(x) => write!(f, "!{x}"),
            StateFormula::And(a, b) => write!(f, "({a} & {b})"),
            StateFormula::Or(a, b) => write!(f, "({a} | {b})"),
        }
    }
}

/// Path formulas. Objectives only use `Eventually` and `EventuallyAlways`;
/// the remaining forms are available to single queries.
#[derive(Debug, Clone, PartialEq)]
pub enum PathFormula {
    Next(StateFormula),
    Until(StateFormula, StateFormula),
    BoundedUntil(StateFormula, StateFormula, u32),
    Eventually(StateFormula),
    Always(StateFormula),
    EventuallyAlways(StateFormula),
}

impl fmt::Display for PathFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathFormula::Next(a) => write!(f, "X {a}"),
            PathFormula::Until(a, b) => write!(f, "{a} U {b}"),
            PathFormula::BoundedUntil(a, b, k) => write!(f, "{a} U<={k} {b}"),
            PathFormula::Eventually(a) => write!(f, "F {a}"),
            PathFormula::Always(a) => write!(f, "G {a}"),
            PathFormula::EventuallyAlways(a) => write!(f, "F G {a}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Max,
    Min,
}

impl Direction {
    pub fn keyword(self) -> &'static str {
        match self {
            Direction::Max => "Pmax",
            Direction::Min => "Pmin",
        }
    }

    pub fn dual(self) -> Direction {
        match self {
            Direction::Max => Direction::Min,
            Direction::Min => Direction::Max,
        }
    }
}

/// `Pmax [ φ ]` or, with a bound, `Pmax<0.95 [ φ ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Query {
    pub direction: Direction,
    pub bound: Option<Interval>,
    pub path: PathFormula,
}

/// A state set together with the formula it was computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetSet {
    pub states: StateSet,
    pub source: StateFormula,
}

/// Exact set of states satisfying a propositional formula.
pub fn eval_state_formula(mdp: &Mdp, formula: &StateFormula) -> Result<TargetSet, EngineError> {
    let mask = eval_mask(mdp, formula)?;
    Ok(TargetSet { states: StateSet::from_mask(mask), source: formula.clone() })
}

fn eval_mask(mdp: &Mdp, f: &StateFormula) -> Result<Vec<bool>, EngineError> {
    let n = mdp.num_states();
    Ok(match f {
        StateFormula::True => vec![true; n],
        StateFormula::Atom(a) => {
            let p = mdp.prop_id(a).ok_or_else(|| EngineError::UnknownProposition(a.clone()))?;
            (0..n).map(|s| mdp.has_label(s, p)).collect()
        }
        StateFormula::Not(x) => eval_mask(mdp, x)?.into_iter().map(|b| !b).collect(),
        StateFormula::And(a, b) => {
            let (a, b) = (eval_mask(mdp, a)?, eval_mask(mdp, b)?);
            a.iter().zip(&b).map(|(x, y)| *x && *y).collect()
        }
        StateFormula::Or(a, b) => {
            let (a, b) = (eval_mask(mdp, a)?, eval_mask(mdp, b)?);
            a.iter().zip(&b).map(|(x, y)| *x || *y).collect()
        }
    })
}
