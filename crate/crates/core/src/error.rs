use thiserror::Error;

use crate::captl::RequirementError;
use crate::casestudy::ParamError;
use crate::mdp::ModelError;
use crate::pctl::EngineError;
use crate::synthesis::SynthError;

pub type Result<T> = std::result::Result<T, Error>;

/// Top-level error for callers that drive the whole pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Requirement(#[from] RequirementError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Synthesis(#[from] SynthError),
    #[error(transparent)]
    Params(#[from] ParamError),
}

impl Error {
    /// True for errors caused by malformed or invalid input documents.
    pub fn is_input_error(&self) -> bool {
        match self {
            Error::Model(_) | Error::Requirement(_) | Error::Params(_) => true,
            Error::Engine(e) => e.is_input_error(),
            Error::Synthesis(e) => e.is_input_error(),
        }
    }
}
