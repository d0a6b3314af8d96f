//! Synthesis for the persistence fragment.

use std::time::{Duration, Instant};

use super::partition::partition_unchecked;
use super::{build_product, Algorithm, Decision, Partition, ProductDtmc, Protocol, ProtocolEntry, SynthError};
use crate::captl::{validate_persistence, Requirement, RequirementError};
use crate::mdp::Mdp;
use crate::pctl::SolveOptions;

/// Wall-clock time spent in each phase.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PhaseTimes {
    pub partition: Duration,
    pub product: Duration,
    pub verification: Duration,
}

impl PhaseTimes {
    pub fn total(&self) -> Duration {
        self.partition + self.product + self.verification
    }
}

#[derive(Debug, Clone)]
pub struct PersistenceOutcome {
    pub protocol: Protocol,
    pub product: ProductDtmc,
    pub partition: Partition,
    pub warnings: Vec<String>,
    pub times: PhaseTimes,
}

/// Synthesises a protocol for a persistence requirement: every objective is
/// `Pmax [ F G φ ]` and the contexts leaving each objective split `[0, c)`
/// into disjoint intervals.
pub fn synth_persistence(mdp: &Mdp, req: &Requirement, opts: &SolveOptions) -> Result<PersistenceOutcome, SynthError> {
    req.validate()?;
    let violations = validate_persistence(req);
    if !violations.is_empty() {
        return Err(RequirementError::NotPersistence(violations).into());
    }

    let t = Instant::now();
    let partition = partition_unchecked(mdp, req, opts)?;
    let partition_time = t.elapsed();

    let t = Instant::now();
    let product = build_product(mdp, req, &partition)?;
    let product_time = t.elapsed();

    let t = Instant::now();
    let c = persistence_probability(&product, &partition)?;
    let verification_time = t.elapsed();

    let mut entries = Vec::new();
    for blocks in &partition.explored {
        let q = &req.objectives[blocks.objective];
        for s in partition.reach.iter() {
            let decision = match blocks.switch[s] {
                Some(wi) => {
                    let w = &req.contexts[wi];
                    Decision::Switch { context: w.id.clone(), target: w.target.clone() }
                }
                None => match blocks.solved.strategy().get(s) {
                    Some(a) => Decision::Action { action: mdp.action_name(a).to_string() },
                    None => continue,
                },
            };
            entries.push(ProtocolEntry { objective: q.id.clone(), state: s, decision });
        }
    }
    let mut protocol = Protocol { algorithm: Algorithm::Persistence, c, entries };
    protocol.normalize(req);

    Ok(PersistenceOutcome {
        protocol,
        product,
        warnings: partition.warnings.clone(),
        partition,
        times: PhaseTimes { partition: partition_time, product: product_time, verification: verification_time },
    })
}

/// Probability that the product eventually stays forever in states whose
/// model state satisfies the active objective's formula.
pub fn persistence_probability(product: &ProductDtmc, partition: &Partition) -> Result<f64, SynthError> {
    let chain = product.to_dtmc()?;
    let formula_of: Vec<_> = partition.explored.iter().map(|b| (b.objective, &b.solved.formula_states)).collect();
    let accept = |v: usize| {
        let ps = product.states[v];
        formula_of.iter().find(|(qi, _)| *qi == ps.objective).filter(|(_, b)| b.contains(ps.state)).map(|(qi, _)| *qi)
    };
    Ok(chain.persistence_prob(accept)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::captl::parse_requirement;
    use crate::mdp::MdpBuilder;
    use crate::synthesis::{compose_protocol, Tag, Turn};

    // 0 -a-> {1 .7, 2 .3}, 0 -b-> {3}; 1 "goal", 2 "safe", 3 "goal" | "safe"
    // with 3 only reached by b. Everything absorbing.
    fn model() -> Mdp {
        let mut b = MdpBuilder::new(4, 0);
        b.prop("goal").prop("safe").label(1, "goal").label(2, "safe");
        b.transition(0, "a", &[(1, 0.7), (2, 0.3)]).transition(0, "b", &[(3, 1.0)]);
        b.transition(1, "a", &[(1, 1.0)]).transition(2, "a", &[(2, 1.0)]).transition(3, "a", &[(3, 1.0)]);
        b.build().unwrap()
    }

    #[test]
    fn single_objective_matches_value() {
        let req = parse_requirement(r#"objective q0 = Pmax [ F G "goal" ]; initial q0;"#).unwrap();
        let out = synth_persistence(&model(), &req, &SolveOptions::default()).unwrap();
        assert!((out.protocol.c - 0.7).abs() < 1e-12);
        // (0,q0,2) -τ-> (0,q0,1) -a-> ...
        assert_eq!(out.product.tags(0), vec![Tag::Tau]);
        assert_eq!(out.product.states[1], ProductState { state: 0, objective: 0, turn: Turn::One });
    }

    #[test]
    fn switching_collects_fallback() {
        let req = parse_requirement(
            r#"objective q0 = Pmax [ F G "goal" ]; objective q1 = Pmax [ F G "safe" ];
               context w01 : q0 -> q1 when Pmax in [0, 0.5); initial q0;"#,
        )
        .unwrap();
        let out = synth_persistence(&model(), &req, &SolveOptions::default()).unwrap();
        // goal with .7, then at state 2 (value 0) switch to safe, which holds there
        assert!((out.protocol.c - 1.0).abs() < 1e-12);
        assert_eq!(out.protocol.get("q0", 2), Some(&Decision::Switch { context: "w01".into(), target: "q1".into() }));
        let induced = compose_protocol(&model(), &req, &out.protocol).unwrap();
        assert!(induced.num_states() > 0);
    }

    #[test]
    fn rejects_general_requirement() {
        let req = parse_requirement(r#"objective q0 = Pmax [ F "goal" ]; initial q0;"#).unwrap();
        let err = synth_persistence(&model(), &req, &SolveOptions::default()).unwrap_err();
        assert!(matches!(err, SynthError::Requirement(RequirementError::NotPersistence(_))));
        assert!(err.is_input_error());
    }

    use crate::synthesis::ProductState;
}
