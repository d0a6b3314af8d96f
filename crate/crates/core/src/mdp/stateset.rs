use std::fmt;

use super::StateId;

/// A set of state indices over a fixed universe `0..n`, iterated in ascending order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StateSet {
    bits: Vec<bool>,
    len: usize,
}

impl StateSet {
    pub fn empty(universe: usize) -> Self {
        StateSet { bits: vec![false; universe], len: 0 }
    }

    pub fn full(universe: usize) -> Self {
        StateSet { bits: vec![true; universe], len: universe }
    }

    pub fn from_states<I: IntoIterator<Item = StateId>>(universe: usize, states: I) -> Self {
        let mut set = StateSet::empty(universe);
        for s in states {
            set.insert(s);
        }
        set
    }

    pub fn from_mask(bits: Vec<bool>) -> Self {
        let len = bits.iter().filter(|b| **b).count();
        StateSet { bits, len }
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, s: StateId) -> bool {
        self.bits.get(s).copied().unwrap_or(false)
    }

    /// Inserts `s`; returns true when it was not present. Panics if `s` is
    /// outside the universe.
    pub fn insert(&mut self, s: StateId) -> bool {
        if self.bits[s] {
            false
        } else {
            self.bits[s] = true;
            self.len += 1;
            true
        }
    }

    pub fn remove(&mut self, s: StateId) -> bool {
        if self.contains(s) {
            self.bits[s] = false;
            self.len -= 1;
            true
        } else {
            false
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = StateId> + '_ {
        self.bits.iter().enumerate().filter_map(|(i, b)| b.then_some(i))
    }

    pub fn to_vec(&self) -> Vec<StateId> {
        self.iter().collect()
    }

    pub fn mask(&self) -> &[bool] {
        &self.bits
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        self.zip(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &StateSet) -> StateSet {
        self.zip(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &StateSet) -> StateSet {
        self.zip(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> StateSet {
        StateSet::from_mask(self.bits.iter().map(|b| !b).collect())
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.iter().all(|s| other.contains(s))
    }

    pub fn is_disjoint(&self, other: &StateSet) -> bool {
        self.iter().all(|s| !other.contains(s))
    }

    fn zip(&self, other: &StateSet, f: impl Fn(bool, bool) -> bool) -> StateSet {
        assert_eq!(self.universe(), other.universe(), "state sets over different universes");
        StateSet::from_mask(self.bits.iter().zip(&other.bits).map(|(a, b)| f(*a, *b)).collect())
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
