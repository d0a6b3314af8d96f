//! Context-aware requirements: prioritised objectives connected by
//! interval-guarded context edges.
//!
//! ```text
//! objective q0 = Pmax [ F G ("goal" & "on") ];
//! objective q1 = Pmax [ F G "safe" ];
//! context w01 : q0 -> q1 when Pmax < 0.75;
//! initial q0;
//! ```
//!
//! A context fires at a state when the source objective's optimal `Pmax`
//! value there lies in the context's interval; the system then switches to
//! the target objective.

mod parse;
mod print;

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::pctl::{Direction, Interval, PathFormula, StateFormula};

pub use parse::{parse_query, parse_requirement, parse_requirement_unchecked};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RequirementError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("invalid requirement: {}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error("not a persistence requirement: {}", .0.join("; "))]
    NotPersistence(Vec<String>),
    #[error("unknown objective \"{0}\"")]
    UnknownObjective(String),
}

/// `id = Pmax [ F Φ ]` or `id = Pmax [ F G Φ ]` (or `Pmin`).
#[derive(Debug, Clone, PartialEq)]
pub struct Objective {
    pub id: String,
    pub direction: Direction,
    pub path: PathFormula,
}

impl Objective {
    /// The state formula under `F` / `F G`: the target or persistence set.
    pub fn formula(&self) -> &StateFormula {
        match &self.path {
            PathFormula::Eventually(f) | PathFormula::EventuallyAlways(f) => f,
            PathFormula::Next(f) | PathFormula::Always(f) => f,
            PathFormula::Until(_, f) | PathFormula::BoundedUntil(_, f, _) => f,
        }
    }

    pub fn is_persistence(&self) -> bool {
        self.direction == Direction::Max && matches!(self.path, PathFormula::EventuallyAlways(_))
    }
}

/// `id : source -> target when Pmax ∈ interval`, bounding the source
/// objective's own path formula.
#[derive(Debug, Clone, PartialEq)]
pub struct Context {
    pub id: String,
    pub source: String,
    pub target: String,
    pub interval: Interval,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Requirement {
    pub objectives: Vec<Objective>,
    pub contexts: Vec<Context>,
    pub initial: String,
}

impl Requirement {
    pub fn objective(&self, id: &str) -> Option<&Objective> {
        self.objectives.iter().find(|q| q.id == id)
    }

    /// Declaration index of an objective.
    pub fn objective_index(&self, id: &str) -> Option<usize> {
        self.objectives.iter().position(|q| q.id == id)
    }

    pub fn context(&self, id: &str) -> Option<&Context> {
        self.contexts.iter().find(|w| w.id == id)
    }

    /// Contexts leaving `q`, in declaration order.
    pub fn contexts_of(&self, q: &str) -> Result<Vec<&Context>, RequirementError> {
        if self.objective(q).is_none() {
            return Err(RequirementError::UnknownObjective(q.to_string()));
        }
        Ok(self.contexts.iter().filter(|w| w.source == q).collect())
    }

    /// `(source, context, target)` triples of the switching relation.
    pub fn edges(&self) -> Vec<(&str, &str, &str)> {
        self.contexts.iter().map(|w| (w.source.as_str(), w.id.as_str(), w.target.as_str())).collect()
    }

    /// Objectives in an order where every context points forward, or `None`
    /// when the objective graph has a cycle.
    pub fn topological_order(&self) -> Option<Vec<&str>> {
        let mut indeg: HashMap<&str, usize> = self.objectives.iter().map(|q| (q.id.as_str(), 0)).collect();
        for w in &self.contexts {
            *indeg.get_mut(w.target.as_str())? += 1;
        }
        let mut ready: Vec<&str> = self.objectives.iter().map(|q| q.id.as_str()).filter(|q| indeg[q] == 0).collect();
        ready.reverse();
        let mut order = Vec::new();
        while let Some(q) = ready.pop() {
            order.push(q);
            for w in self.contexts.iter().filter(|w| w.source == q) {
                let d = indeg.get_mut(w.target.as_str())?;
                *d -= 1;
                if *d == 0 {
                    ready.push(&w.target);
                }
            }
        }
        (order.len() == self.objectives.len()).then_some(order)
    }

    /// Structural validation shared by both synthesis procedures.
    pub fn validate(&self) -> Result<(), RequirementError> {
        let mut errors = Vec::new();
        let mut ids = HashSet::new();
        for q in &self.objectives {
            if !ids.insert(q.id.as_str()) {
                errors.push(format!("objective \"{}\" declared twice", q.id));
            }
            if !matches!(q.path, PathFormula::Eventually(_) | PathFormula::EventuallyAlways(_)) {
                errors.push(format!("objective \"{}\" must be an F or F G query", q.id));
            }
        }
        let mut wids = HashSet::new();
        for w in &self.contexts {
            if !wids.insert(w.id.as_str()) {
                errors.push(format!("context \"{}\" declared twice", w.id));
            }
            for end in [&w.source, &w.target] {
                if self.objective(end).is_none() {
                    errors.push(format!("context \"{}\" refers to unknown objective \"{end}\"", w.id));
                }
            }
            if w.source == w.target {
                errors.push(format!("context \"{}\" switches from \"{}\" to itself", w.id, w.source));
            }
            if !w.interval.within_unit() || w.interval.lo.value > w.interval.hi.value {
                errors.push(format!("context \"{}\": malformed interval {}", w.id, w.interval));
            } else if w.interval.is_empty() {
                errors.push(format!("context \"{}\": empty interval {}", w.id, w.interval));
            }
        }
        if self.initial.is_empty() {
            errors.push("missing initial declaration".to_string());
        } else if self.objective(&self.initial).is_none() {
            errors.push(format!("initial objective \"{}\" does not exist", self.initial));
        }
        if errors.is_empty() && self.topological_order().is_none() {
            errors.push("objective graph is cyclic".to_string());
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(RequirementError::Invalid(errors))
        }
    }
}

/// Violations of the persistence fragment: every objective is `Pmax [F G B]`
/// and the intervals leaving each objective are pairwise disjoint with union
/// `[0, c)` for some `0 < c <= 1`. Empty when the requirement conforms.
pub fn validate_persistence(req: &Requirement) -> Vec<String> {
    let mut out = Vec::new();
    for q in &req.objectives {
        if !q.is_persistence() {
            out.push(format!("objective \"{}\" is not of the form Pmax [ F G B ]", q.id));
        }
        let ws: Vec<&Context> = req.contexts.iter().filter(|w| w.source == q.id).collect();
        if ws.is_empty() {
            continue;
        }
        let mut overlap = false;
        for (i, a) in ws.iter().enumerate() {
            for b in &ws[i + 1..] {
                if a.interval.overlaps(&b.interval) {
                    out.push(format!("objective \"{}\": intervals overlap ({} {} and {} {})", q.id, a.id, a.interval, b.id, b.interval));
                    overlap = true;
                }
            }
        }
        if overlap {
            continue;
        }
        if let Err(why) = downward_closed_union(ws.iter().map(|w| w.interval).collect()) {
            out.push(format!("objective \"{}\": union not of form [0,c): {why}", q.id));
        }
    }
    out
}

/// Checks that disjoint intervals tile `[0, c)` without gaps.
fn downward_closed_union(mut ivs: Vec<Interval>) -> Result<f64, String> {
    ivs.sort_by(|a, b| a.lo.value.total_cmp(&b.lo.value).then(a.lo.strict.cmp(&b.lo.strict)));
    let first = ivs[0];
    if first.lo.value != 0.0 || first.lo.strict {
        return Err(format!("starts at {first}"));
    }
    for pair in ivs.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        // contiguous iff a ends where b starts with exactly one side closed
        if a.hi.value != b.lo.value || a.hi.strict == b.lo.strict {
            return Err(format!("gap or overlap between {a} and {b}"));
        }
    }
    let last = ivs[ivs.len() - 1];
    if !last.hi.strict || last.hi.value <= 0.0 || last.hi.value > 1.0 {
        return Err(format!("ends with {last}"));
    }
    Ok(last.hi.value)
}

/// Contexts of `q` whose interval contains `x`, in declaration order. The
/// first one decides the switch; more than one means the requirement is
/// nondeterministic at `x`.
pub fn firing_contexts<'r>(req: &'r Requirement, q: &str, x: f64) -> Vec<&'r Context> {
    req.contexts.iter().filter(|w| w.source == q && w.interval.contains(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG3: &str = r#"
        // robot requirement
        objective q0 = Pmax [ F G ("goal" & "h>3" & "on") ];
        objective q1 = Pmax [ F G ("chrg" & "h>3" & "sleep") ];
        objective q2 = Pmax [ F G ("safe" & "sleep") ];
        objective q3 = Pmax [ F G "error" ];
        context w01 : q0 -> q1 when Pmax in [0.75, 0.85);
        context w02 : q0 -> q2 when Pmax < 0.75;
        context w13 : q1 -> q3 when Pmax < 0.7;
        context w23 : q2 -> q3 when Pmax < 0.8;
        initial q0;
    "#;

    #[test]
    fn robot_requirement_structure() {
        let r = parse_requirement(FIG3).unwrap();
        let ids: Vec<_> = r.objectives.iter().map(|q| q.id.as_str()).collect();
        assert_eq!(ids, ["q0", "q1", "q2", "q3"]);
        let ws: Vec<_> = r.contexts.iter().map(|w| w.id.as_str()).collect();
        assert_eq!(ws, ["w01", "w02", "w13", "w23"]);
        assert_eq!(r.initial, "q0");
        let of = |q| r.contexts_of(q).unwrap().iter().map(|w| w.id.clone()).collect::<Vec<_>>();
        assert_eq!(of("q0"), ["w01", "w02"]);
        assert_eq!(of("q1"), ["w13"]);
        assert!(of("q3").is_empty());
        assert!(validate_persistence(&r).is_empty());
    }

    #[test]
    fn single_objective_is_valid() {
        let r = parse_requirement("objective q0 = Pmax [ F \"goal\" ]; initial q0;").unwrap();
        assert!(r.contexts_of("q0").unwrap().is_empty());
        assert!(matches!(r.contexts_of("zz"), Err(RequirementError::UnknownObjective(_))));
    }

    #[test]
    fn cycle_rejected() {
        let text = r#"objective q0 = Pmax [ F "a" ]; objective q1 = Pmax [ F "b" ];
            context w01 : q0 -> q1 when Pmax < 0.5; context w10 : q1 -> q0 when Pmax < 0.5; initial q0;"#;
        let err = parse_requirement(text).unwrap_err();
        assert!(err.to_string().contains("objective graph is cyclic"), "{err}");
    }

    #[test]
    fn overlapping_intervals_reported() {
        let text = r#"objective q0 = Pmax [ F G "a" ]; objective q1 = Pmax [ F G "b" ]; objective q2 = Pmax [ F G "c" ];
            context w01 : q0 -> q1 when Pmax < 0.85; context w02 : q0 -> q2 when Pmax < 0.75; initial q0;"#;
        let v = validate_persistence(&parse_requirement(text).unwrap());
        assert!(v.iter().any(|m| m.contains("intervals overlap")), "{v:?}");
    }

    #[test]
    fn union_must_start_at_zero() {
        let text = r#"objective q0 = Pmax [ F G "a" ]; objective q1 = Pmax [ F G "b" ];
            context w01 : q0 -> q1 when Pmax in [0.1, 0.5); initial q0;"#;
        let v = validate_persistence(&parse_requirement(text).unwrap());
        assert!(v.iter().any(|m| m.contains("union not of form [0,c)")), "{v:?}");
    }

    #[test]
    fn eventually_objective_is_not_persistence() {
        let r = parse_requirement("objective q0 = Pmax [ F \"goal\" ]; initial q0;").unwrap();
        assert_eq!(validate_persistence(&r).len(), 1);
        let r = parse_requirement("objective q0 = Pmin [ F G \"goal\" ]; initial q0;").unwrap();
        assert_eq!(validate_persistence(&r).len(), 1);
    }

    #[test]
    fn closed_upper_end_rejected() {
        let text = r#"objective q0 = Pmax [ F G "a" ]; objective q1 = Pmax [ F G "b" ];
            context w01 : q0 -> q1 when Pmax <= 0.5; initial q0;"#;
        assert_eq!(validate_persistence(&parse_requirement(text).unwrap()).len(), 1);
    }

    #[test]
    fn unknown_reference_and_bad_interval() {
        let text = r#"objective q0 = Pmax [ F "a" ];
            context w : q0 -> q9 when Pmax in [0.6, 0.2]; initial q0;"#;
        let err = parse_requirement(text).unwrap_err().to_string();
        assert!(err.contains("unknown objective \"q9\""), "{err}");
        assert!(err.contains("malformed interval"), "{err}");
    }

    #[test]
    fn fig3_context_classification() {
        let r = parse_requirement(FIG3).unwrap();
        let fires = |q, x| firing_contexts(&r, q, x).iter().map(|w| w.id.clone()).collect::<Vec<_>>();
        assert_eq!(fires("q0", 0.8), ["w01"]);
        assert!(fires("q0", 0.85).is_empty());
        assert_eq!(fires("q0", 0.7), ["w02"]);
        assert!(fires("q1", 0.7).is_empty());
    }
}
