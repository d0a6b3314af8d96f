use std::fmt;

use super::{EngineError, ValueVector};
use crate::mdp::StateId;

/// One endpoint of a probability interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound {
    pub value: f64,
    /// Open endpoint when true.
    pub strict: bool,
}

/// A sub-interval of `[0,1]` with independently open or closed endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: Bound,
    pub hi: Bound,
}

impl Interval {
    pub fn new(lo: f64, lo_strict: bool, hi: f64, hi_strict: bool) -> Self {
        Interval { lo: Bound { value: lo, strict: lo_strict }, hi: Bound { value: hi, strict: hi_strict } }
    }

    /// `[0, c)`
    pub fn below(c: f64) -> Self {
        Interval::new(0.0, false, c, true)
    }

    /// `[0, c]`
    pub fn at_most(c: f64) -> Self {
        Interval::new(0.0, false, c, false)
    }

    /// `(c, 1]`
    pub fn above(c: f64) -> Self {
        Interval::new(c, true, 1.0, false)
    }

    /// `[c, 1]`
    pub fn at_least(c: f64) -> Self {
        Interval::new(c, false, 1.0, false)
    }

    /// Raw membership test, no tolerance.
    pub fn contains(&self, x: f64) -> bool {
        let above_lo = if self.lo.strict { x > self.lo.value } else { x >= self.lo.value };
        let below_hi = if self.hi.strict { x < self.hi.value } else { x <= self.hi.value };
        above_lo && below_hi
    }

    pub fn is_empty(&self) -> bool {
        if self.lo.strict || self.hi.strict {
            self.lo.value >= self.hi.value
        } else {
            self.lo.value > self.hi.value
        }
    }

    pub fn within_unit(&self) -> bool {
        (0.0..=1.0).contains(&self.lo.value) && (0.0..=1.0).contains(&self.hi.value)
    }

    /// True when some real number lies in both intervals.
    pub fn overlaps(&self, other: &Interval) -> bool {
        let lo = max_lower(self.lo, other.lo);
        let hi = min_upper(self.hi, other.hi);
        !Interval { lo, hi }.is_empty()
    }

    /// Distance from `x` to the nearest finite endpoint.
    pub fn endpoint_distance(&self, x: f64) -> f64 {
        (x - self.lo.value).abs().min((x - self.hi.value).abs())
    }
}

fn max_lower(a: Bound, b: Bound) -> Bound {
    if a.value > b.value || (a.value == b.value && a.strict) {
        a
    } else {
        b
    }
}

fn min_upper(a: Bound, b: Bound) -> Bound {
    if a.value < b.value || (a.value == b.value && a.strict) {
        a
    } else {
        b
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.lo.strict { '(' } else { '[' };
        let close = if self.hi.strict { ')' } else { ']' };
        write!(f, "{open}{}, {}{close}", self.lo.value, self.hi.value)
    }
}

/// Whether the optimal value at `s` lies in `interval`. Raw comparison; see
/// [`boundary_warning`] for values that sit numerically close to an endpoint.
pub fn verify_context(x: &ValueVector, s: StateId, interval: &Interval) -> Result<bool, EngineError> {
    let v = x.get(s).ok_or(EngineError::OutsideDomain(s))?;
    Ok(interval.contains(v))
}

/// Warning text when `value` lies within `10 * epsilon` of an endpoint of `interval`.
/// Values of exactly 0 or 1 come from graph analysis, not iteration, and
/// never warn.
pub fn boundary_warning(value: f64, interval: &Interval, epsilon: f64) -> Option<String> {
    if value == 0.0 || value == 1.0 {
        return None;
    }
    let d = interval.endpoint_distance(value);
    (d < 10.0 * epsilon)
        .then(|| format!("value {value} is within {d:.3e} of an endpoint of {interval}; classification is boundary-sensitive"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_open_membership() {
        let j = Interval::new(0.75, false, 0.85, true);
        assert!(j.contains(0.8));
        assert!(!j.contains(0.85));
        assert!(j.contains(0.75));
        assert!(!Interval::below(0.7).contains(0.7));
    }

    #[test]
    fn emptiness_and_overlap() {
        assert!(Interval::new(0.5, false, 0.5, true).is_empty());
        assert!(!Interval::new(0.5, false, 0.5, false).is_empty());
        assert!(Interval::below(0.85).overlaps(&Interval::below(0.75)));
        assert!(!Interval::new(0.75, false, 0.85, true).overlaps(&Interval::below(0.75)));
        assert!(Interval::new(0.75, false, 0.85, true).overlaps(&Interval::at_most(0.75)));
    }

    #[test]
    fn boundary_warning_threshold() {
        let j = Interval::below(0.7);
        assert!(boundary_warning(0.699_999_5, &j, 1e-6).is_some());
        assert!(boundary_warning(0.69, &j, 1e-6).is_none());
        assert!(boundary_warning(0.0, &j, 1e-6).is_none());
    }
}
