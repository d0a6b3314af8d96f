use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::SynthError;
use crate::captl::Requirement;
use crate::mdp::StateId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Pctl,
    Persistence,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Pctl => "pctl",
            Algorithm::Persistence => "persistence",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Decision {
    Action { action: String },
    Switch { context: String, target: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolEntry {
    pub objective: String,
    pub state: StateId,
    pub decision: Decision,
}

/// Partial map from (objective, state) to an action or a context switch,
/// with the satisfaction probability it achieves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Protocol {
    pub algorithm: Algorithm,
    pub c: f64,
    pub entries: Vec<ProtocolEntry>,
}

impl Protocol {
    /// Sorts entries by objective declaration order, then state.
    pub fn normalize(&mut self, req: &Requirement) {
        let rank = |q: &str| req.objective_index(q).unwrap_or(usize::MAX);
        self.entries.sort_by_key(|e| (rank(&e.objective), e.state));
    }

    pub fn get(&self, objective: &str, state: StateId) -> Option<&Decision> {
        self.entries.iter().find(|e| e.objective == objective && e.state == state).map(|e| &e.decision)
    }

    /// Lookup table keyed by (objective, state).
    pub fn table(&self) -> Result<HashMap<(&str, StateId), &Decision>, SynthError> {
        let mut out = HashMap::with_capacity(self.entries.len());
        for e in &self.entries {
            if out.insert((e.objective.as_str(), e.state), &e.decision).is_some() {
                return Err(SynthError::Incompatible(format!("two decisions for objective {} at state {}", e.objective, e.state)));
            }
        }
        Ok(out)
    }

    pub fn switches(&self) -> impl Iterator<Item = &ProtocolEntry> {
        self.entries.iter().filter(|e| matches!(e.decision, Decision::Switch { .. }))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("protocol serializes")
    }

    pub fn from_json(text: &str) -> Result<Protocol, SynthError> {
        serde_json::from_str(text).map_err(|e| SynthError::Protocol(e.to_string()))
    }
}
