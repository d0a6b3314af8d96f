//! Independent ground truth for the test suites: exact rational solving,
//! brute-force strategy enumeration, a naive end-component fixpoint,
//! seeded simulation and trace comparison.
//!
//! Nothing here calls into the engine's value iteration or precomputation.

mod enumerate;
mod exact;
mod mec;
mod simulate;
mod trace;

pub use enumerate::{accepting_bscc_states, enumerate_strategy_optimum, Goal, STRATEGY_LIMIT};
pub use exact::{exact_dtmc_reach, rational, to_f64, EXACT_LIMIT};
pub use mec::naive_mecs;
pub use simulate::{accepting_bsccs, default_horizon, simulate, SimStats};
pub use trace::{check_product_correspondence, collapse, enumerate_paths, stutter_equivalent, TraceSample};
