//! Explicit-state MDP toolkit for context-aware protocol synthesis.
//!
//! The crate is organised bottom-up:
//!
//! * [`mdp`]: the model, its JSON interchange format and graph queries.
//! * [`pctl`]: qualitative precomputation, value iteration, end components,
//!   persistence, strategy extraction and DTMC analysis.
//! * [`captl`]: the requirement language (objectives, contexts, DSL).
//! * [`synthesis`]: the per-state and the partition-based synthesis procedures,
//!   the compositions they rely on and the protocol format.
//! * [`oracle`]: exact and brute-force ground truth used by the test suites.
//! * [`casestudy`]: generators for the robot and biochip models plus seeded
//!   random instances.

pub mod captl;
pub mod casestudy;
pub mod mdp;
pub mod oracle;
pub mod par;
pub mod pctl;
pub mod synthesis;

mod error;

pub use error::{Error, Result};
pub use par::Exec;
