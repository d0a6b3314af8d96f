//! Canonical text form. Binary state formulas are fully parenthesised so
//! that printing and re-parsing gives back the same tree.

use std::fmt;

use super::{Context, Objective, Requirement};
use crate::pctl::{Interval, Query};

fn write_bound(f: &mut fmt::Formatter<'_>, j: &Interval, ordering: bool) -> fmt::Result {
    let from_zero = j.lo.value == 0.0 && !j.lo.strict;
    let to_one = j.hi.value == 1.0 && !j.hi.strict;
    match (from_zero, to_one) {
        (true, _) if j.hi.strict => write!(f, "< {}", j.hi.value),
        (true, false) => write!(f, "<= {}", j.hi.value),
        (false, true) if ordering && j.lo.strict => write!(f, "> {}", j.lo.value),
        (false, true) if ordering => write!(f, ">= {}", j.lo.value),
        _ => write!(f, "in {j}"),
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "objective {} = {} [ {} ];", self.id, self.direction.keyword(), self.path)
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "context {} : {} -> {} when Pmax ", self.id, self.source, self.target)?;
        write_bound(f, &self.interval, false)?;
        write!(f, ";")
    }
}

impl fmt::Display for Requirement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in &self.objectives {
            writeln!(f, "{q}")?;
        }
        for w in &self.contexts {
            writeln!(f, "{w}")?;
        }
        writeln!(f, "initial {};", self.initial)
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.direction.keyword())?;
        if let Some(j) = &self.bound {
            write!(f, " ")?;
            write_bound(f, j, true)?;
        }
        write!(f, " [ {} ]", self.path)
    }
}
