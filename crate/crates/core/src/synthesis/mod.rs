//! Protocol synthesis for context-aware requirements.
//!
//! Two procedures are provided. [`synth_pctl`] walks the model state by
//! state, checking contexts and fixing one locally optimal action per
//! (objective, state) pair. [`synth_persistence`] handles the persistence
//! fragment: it partitions the reachable states once per objective, builds
//! the turn-based product of model, requirement and strategies, and reads
//! the satisfaction probability off the product's bottom SCCs.

mod compose;
mod dot;
mod objective;
mod partition;
mod pctl;
mod persistence;
mod product;
mod protocol;

use thiserror::Error;

use crate::captl::RequirementError;
use crate::pctl::EngineError;

pub use compose::{compose_protocol, InducedChain};
pub use dot::{induced_to_dot, product_to_dot};
pub use objective::{solve_objectives, ObjectiveSolution};
pub use partition::{partition_states, ObjectiveBlocks, Partition};
pub use pctl::{synth_pctl, PctlOutcome};
pub use persistence::{persistence_probability, synth_persistence, PersistenceOutcome, PhaseTimes};
pub use product::{build_product, ProductDtmc, ProductEdge, ProductState, Tag, Turn};
pub use protocol::{Algorithm, Decision, Protocol, ProtocolEntry};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthError {
    #[error(transparent)]
    Requirement(#[from] RequirementError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("no strategy action for objective {objective} at state {state}")]
    MissingStrategy { objective: String, state: usize },
    #[error("product state {state} has {tags} enabled action tags")]
    NotADtmc { state: usize, tags: usize },
    #[error("protocol incompatible with model or requirement: {0}")]
    Incompatible(String),
    #[error("malformed protocol document: {0}")]
    Protocol(String),
}

impl SynthError {
    pub fn is_input_error(&self) -> bool {
        match self {
            SynthError::Requirement(_) | SynthError::Incompatible(_) | SynthError::Protocol(_) => true,
            SynthError::Engine(e) => e.is_input_error(),
            SynthError::MissingStrategy { .. } | SynthError::NotADtmc { .. } => false,
        }
    }
}
