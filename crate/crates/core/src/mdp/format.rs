//! JSON model interchange format.
//!
//! ```json
//! { "states": 2, "init": 0, "props": ["goal"],
//!   "labels": { "1": ["goal"] },
//!   "names": { "0": "start" },
//!   "transitions": [ { "from": 0, "action": "a", "branches": [ { "to": 1, "prob": 1.0 } ] } ] }
//! ```
//!
//! `names` is optional. The optional `actions` array fixes the action table
//! order; without it actions are numbered by first appearance in
//! `transitions`. The serializer always writes `actions` so that documents
//! round-trip exactly.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Mdp, MdpBuilder, ModelError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub states: usize,
    pub init: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actions: Option<Vec<String>>,
    #[serde(default)]
    pub props: Vec<String>,
    #[serde(default)]
    pub labels: BTreeMap<usize, Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub names: BTreeMap<usize, String>,
    #[serde(default)]
    pub transitions: Vec<TransitionEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionEntry {
    pub from: usize,
    pub action: String,
    pub branches: Vec<Branch>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Branch {
    pub to: usize,
    pub prob: f64,
}

impl ModelDocument {
    pub fn into_mdp(self) -> Result<Mdp, ModelError> {
        let mut b = MdpBuilder::new(self.states, self.init);
        for a in self.actions.iter().flatten() {
            b.action(a);
        }
        for p in &self.props {
            b.prop(p);
        }
        for (s, ps) in &self.labels {
            for p in ps {
                b.label(*s, p);
            }
        }
        for (s, n) in self.names {
            b.name(s, n);
        }
        for t in &self.transitions {
            let branches: Vec<_> = t.branches.iter().map(|br| (br.to, br.prob)).collect();
            b.transition(t.from, &t.action, &branches);
        }
        b.build()
    }

    pub fn from_mdp(mdp: &Mdp) -> Self {
        let n = mdp.num_states();
        let labels = (0..n)
            .filter(|&s| !mdp.labels(s).is_empty())
            .map(|s| (s, mdp.labels(s).iter().map(|&p| mdp.props()[p].clone()).collect()))
            .collect();
        let names = (0..n).filter_map(|s| mdp.name(s).map(|x| (s, x.to_string()))).collect();
        let transitions = (0..n)
            .flat_map(|s| {
                mdp.choices(s).iter().map(move |c| TransitionEntry {
                    from: s,
                    action: mdp.action_name(c.action).to_string(),
                    branches: c.branches.iter().map(|&(to, prob)| Branch { to, prob }).collect(),
                })
            })
            .collect();
        ModelDocument {
            states: n,
            init: mdp.initial(),
            actions: Some(mdp.actions().to_vec()),
            props: mdp.props().to_vec(),
            labels,
            names,
            transitions,
        }
    }
}

/// Parses and validates a model document.
pub fn parse_model(text: &str) -> Result<Mdp, ModelError> {
    let doc: ModelDocument =
        serde_json::from_str(text).map_err(|e| ModelError::Syntax { line: e.line(), column: e.column(), message: e.to_string() })?;
    doc.into_mdp()
}

/// Canonical pretty-printed JSON for `mdp`.
pub fn serialize_model(mdp: &Mdp) -> String {
    serde_json::to_string_pretty(&ModelDocument::from_mdp(mdp)).expect("model document serializes")
}
