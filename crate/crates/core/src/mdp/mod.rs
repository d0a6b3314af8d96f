//! Explicit-state Markov decision processes.
//!
//! States are dense indices `0..n`. Actions live in a global table ordered by
//! first declaration; that order is the tie-break order everywhere else in
//! the crate. A state without enabled actions is a deadlock: it is legal,
//! reported by [`Mdp::deadlocks`], and analysed as absorbing.

mod format;
mod graph;
mod stateset;

use std::collections::HashMap;

use thiserror::Error;

pub use format::{parse_model, serialize_model, ModelDocument};
pub use graph::{reach, reach_within, sccs};
pub use stateset::StateSet;

pub type StateId = usize;
pub type ActionId = usize;
pub type PropId = usize;

/// Distribution sums must lie within this distance of 1.
pub const SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("invalid model: {}", .0.join("; "))]
    Semantic(Vec<String>),
    #[error("state {0} does not exist")]
    InvalidState(StateId),
}

/// One enabled action at a state and its successor distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct Choice {
    pub action: ActionId,
    pub branches: Vec<(StateId, f64)>,
}

impl Choice {
    pub fn successors(&self) -> impl Iterator<Item = StateId> + '_ {
        self.branches.iter().map(|(t, _)| *t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cardinality {
    pub states: usize,
    pub transitions: usize,
    pub choices: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mdp {
    initial: StateId,
    actions: Vec<String>,
    props: Vec<String>,
    labels: Vec<Vec<PropId>>,
    names: Vec<Option<String>>,
    choices: Vec<Vec<Choice>>,
}

impl Mdp {
    pub fn num_states(&self) -> usize {
        self.choices.len()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn action_name(&self, a: ActionId) -> &str {
        &self.actions[a]
    }

    pub fn action_id(&self, name: &str) -> Option<ActionId> {
        self.actions.iter().position(|a| a == name)
    }

    pub fn props(&self) -> &[String] {
        &self.props
    }

    pub fn prop_id(&self, name: &str) -> Option<PropId> {
        self.props.iter().position(|p| p == name)
    }

    /// Proposition ids labelling `s`, ascending.
    pub fn labels(&self, s: StateId) -> &[PropId] {
        &self.labels[s]
    }

    pub fn has_label(&self, s: StateId, p: PropId) -> bool {
        self.labels[s].binary_search(&p).is_ok()
    }

    pub fn name(&self, s: StateId) -> Option<&str> {
        self.names[s].as_deref()
    }

    /// Display name of `s`, falling back to the index.
    pub fn display_name(&self, s: StateId) -> String {
        self.names[s].clone().unwrap_or_else(|| s.to_string())
    }

    /// Enabled choices at `s`, in action declaration order.
    pub fn choices(&self, s: StateId) -> &[Choice] {
        &self.choices[s]
    }

    pub fn choice(&self, s: StateId, a: ActionId) -> Option<&Choice> {
        self.choices[s].iter().find(|c| c.action == a)
    }

    pub fn is_enabled(&self, s: StateId, a: ActionId) -> bool {
        self.choice(s, a).is_some()
    }

    pub fn is_deadlock(&self, s: StateId) -> bool {
        self.choices[s].is_empty()
    }

    pub fn deadlocks(&self) -> Vec<StateId> {
        (0..self.num_states()).filter(|&s| self.is_deadlock(s)).collect()
    }

    /// Successors of `s` under `a` with positive probability; empty when `a`
    /// is not enabled at `s`.
    pub fn post(&self, s: StateId, a: ActionId) -> StateSet {
        let mut out = StateSet::empty(self.num_states());
        if let Some(c) = self.choices.get(s).and_then(|cs| cs.iter().find(|c| c.action == a)) {
            for t in c.successors() {
                out.insert(t);
            }
        }
        out
    }

    pub fn check_state(&self, s: StateId) -> Result<(), ModelError> {
        if s < self.num_states() {
            Ok(())
        } else {
            Err(ModelError::InvalidState(s))
        }
    }

    pub fn cardinality(&self) -> Cardinality {
        Cardinality {
            states: self.num_states(),
            transitions: self.choices.iter().flatten().map(|c| c.branches.len()).sum(),
            choices: self.choices.iter().map(Vec::len).sum(),
        }
    }
}

type Branches = Vec<(StateId, f64)>;

/// Incremental constructor; [`MdpBuilder::build`] validates every invariant.
#[derive(Debug, Clone)]
pub struct MdpBuilder {
    num_states: usize,
    initial: StateId,
    actions: Vec<String>,
    action_index: HashMap<String, ActionId>,
    props: Vec<String>,
    labels: Vec<(StateId, String)>,
    names: Vec<(StateId, String)>,
    transitions: Vec<(StateId, ActionId, Branches)>,
}

impl MdpBuilder {
    pub fn new(num_states: usize, initial: StateId) -> Self {
        MdpBuilder {
            num_states,
            initial,
            actions: Vec::new(),
            action_index: HashMap::new(),
            props: Vec::new(),
            labels: Vec::new(),
            names: Vec::new(),
            transitions: Vec::new(),
        }
    }

    /// Declares an atomic proposition (idempotent).
    pub fn prop(&mut self, name: &str) -> &mut Self {
        if !self.props.iter().any(|p| p == name) {
            self.props.push(name.to_string());
        }
        self
    }

    pub fn label(&mut self, s: StateId, prop: &str) -> &mut Self {
        self.labels.push((s, prop.to_string()));
        self
    }

    pub fn name(&mut self, s: StateId, name: impl Into<String>) -> &mut Self {
        self.names.push((s, name.into()));
        self
    }

    /// Declares an action name without adding transitions, fixing its
    /// position in the action table.
    pub fn action(&mut self, name: &str) -> ActionId {
        if let Some(&id) = self.action_index.get(name) {
            return id;
        }
        let id = self.actions.len();
        self.actions.push(name.to_string());
        self.action_index.insert(name.to_string(), id);
        id
    }

    pub fn transition(&mut self, from: StateId, action: &str, branches: &[(StateId, f64)]) -> &mut Self {
        let a = self.action(action);
        self.transitions.push((from, a, branches.to_vec()));
        self
    }

    pub fn build(self) -> Result<Mdp, ModelError> {
        let n = self.num_states;
        let mut errors = Vec::new();
        if self.initial >= n {
            errors.push(format!("initial state {} does not exist", self.initial));
        }
        let mut props_seen = HashMap::new();
        for (i, p) in self.props.iter().enumerate() {
            if props_seen.insert(p.as_str(), i).is_some() {
                errors.push(format!("proposition \"{p}\" declared twice"));
            }
        }
        let mut labels = vec![Vec::new(); n];
        for (s, p) in &self.labels {
            if *s >= n {
                errors.push(format!("label on missing state {s}"));
                continue;
            }
            match props_seen.get(p.as_str()) {
                Some(&id) => {
                    if !labels[*s].contains(&id) {
                        labels[*s].push(id);
                    }
                }
                None => errors.push(format!("state {s} labelled with undeclared proposition \"{p}\"")),
            }
        }
        for l in &mut labels {
            l.sort_unstable();
        }
        let mut names = vec![None; n];
        for (s, name) in self.names {
            if s >= n {
                errors.push(format!("name for missing state {s}"));
            } else {
                names[s] = Some(name);
            }
        }
        let mut choices: Vec<Vec<Choice>> = vec![Vec::new(); n];
        let mut declared = std::collections::HashSet::new();
        for (from, a, branches) in self.transitions {
            let act = &self.actions[a];
            if from >= n {
                errors.push(format!("transition from missing state {from} (action {act})"));
                continue;
            }
            if !declared.insert((from, a)) {
                errors.push(format!("duplicate transitions entry for state {from}, action {act}"));
                continue;
            }
            let mut ok = true;
            let mut sum = 0.0;
            for (i, &(to, p)) in branches.iter().enumerate() {
                if to >= n {
                    errors.push(format!("state {from}, action {act}: successor {to} does not exist"));
                    ok = false;
                }
                if !(p > 0.0 && p <= 1.0) {
                    errors.push(format!("state {from}, action {act}: probability {p} not in (0,1]"));
                    ok = false;
                }
                if branches[..i].iter().any(|(t, _)| *t == to) {
                    errors.push(format!("state {from}, action {act}: successor {to} listed twice"));
                    ok = false;
                }
                sum += p;
            }
            if branches.is_empty() {
                // a zero-sum row means the action is not enabled here
                continue;
            }
            if (sum - 1.0).abs() > SUM_TOLERANCE {
                // trim float noise from the decimal literals (0.6 + 0.3 reports as 0.9)
                let shown = (sum * 1e12).round() / 1e12;
                errors.push(format!("state {from}, action {act}: distribution sum {shown} ∉ {{0,1}}"));
                ok = false;
            }
            if ok {
                choices[from].push(Choice { action: a, branches });
            }
        }
        if !errors.is_empty() {
            return Err(ModelError::Semantic(errors));
        }
        for cs in &mut choices {
            cs.sort_by_key(|c| c.action);
        }
        Ok(Mdp { initial: self.initial, actions: self.actions, props: self.props, labels, names, choices })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain() -> Mdp {
        let mut b = MdpBuilder::new(3, 0);
        b.prop("goal").label(2, "goal");
        b.transition(0, "a", &[(1, 0.9), (2, 0.1)]);
        b.transition(1, "a", &[(2, 1.0)]);
        b.build().unwrap()
    }

    #[test]
    fn post_and_disabled_action() {
        let m = chain();
        let a = m.action_id("a").unwrap();
        assert_eq!(m.post(0, a).to_vec(), vec![1, 2]);
        assert!(m.post(2, a).is_empty());
        assert_eq!(m.deadlocks(), vec![2]);
    }

    #[test]
    fn cardinality_counts() {
        let mut b = MdpBuilder::new(2, 0);
        b.transition(0, "a", &[(1, 1.0)]).transition(1, "a", &[(1, 1.0)]);
        let m = b.build().unwrap();
        assert_eq!(m.cardinality(), Cardinality { states: 2, transitions: 2, choices: 2 });

        let empty = MdpBuilder::new(4, 0).build().unwrap();
        assert_eq!(empty.cardinality(), Cardinality { states: 4, transitions: 0, choices: 0 });
    }

    #[test]
    fn rejects_bad_distribution() {
        let mut b = MdpBuilder::new(3, 0);
        b.transition(0, "a", &[(1, 0.6), (2, 0.3)]);
        let err = b.build().unwrap_err();
        assert!(err.to_string().contains("distribution sum 0.9"), "{err}");
    }

    #[test]
    fn rejects_structural_violations() {
        let mut b = MdpBuilder::new(2, 5);
        b.transition(0, "a", &[(3, 1.0)]);
        b.transition(0, "a", &[(1, 1.0)]);
        b.label(1, "nope");
        let ModelError::Semantic(errs) = b.build().unwrap_err() else { panic!() };
        assert_eq!(errs.len(), 4, "{errs:?}");
    }

    #[test]
    fn zero_probability_rejected() {
        let mut b = MdpBuilder::new(2, 0);
        b.transition(0, "a", &[(0, 1.0), (1, 0.0)]);
        assert!(b.build().is_err());
    }
}
