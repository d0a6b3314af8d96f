//! Generators for the robot and biochip case studies and for seeded random
//! instances.
//!
//! Both case studies are only partly pinned down by their informal
//! descriptions, so the encodings here fix concrete dynamics and expose the
//! free choices as parameters. State counts are therefore specific to these
//! encodings.

mod explore;
mod meda;
pub mod random;
mod robot;

use thiserror::Error;

use crate::mdp::{serialize_model, Mdp};

pub use explore::explore;
pub use meda::{gen_meda, MedaParams};
pub use robot::{gen_robot, RobotParams};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid parameters: {0}")]
pub struct ParamError(pub String);

/// A generated instance: the model and the requirement document for it.
#[derive(Debug, Clone)]
pub struct CaseStudy {
    pub model: Mdp,
    pub requirement: String,
}

impl CaseStudy {
    pub fn model_json(&self) -> String {
        serialize_model(&self.model)
    }
}

/// Parses `WxH` (also accepts `W×H`).
pub fn parse_size(text: &str) -> Result<(usize, usize), ParamError> {
    let bad = || ParamError(format!("size \"{text}\" is not of the form WxH"));
    let (w, h) = text.split_once(['x', 'X', '×']).ok_or_else(bad)?;
    let w = w.trim().parse().map_err(|_| bad())?;
    let h = h.trim().parse().map_err(|_| bad())?;
    Ok((w, h))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(parse_size("3x3"), Ok((3, 3)));
        assert_eq!(parse_size("8×5"), Ok((8, 5)));
        assert!(parse_size("8").is_err());
        assert!(parse_size("ax2").is_err());
    }
}
