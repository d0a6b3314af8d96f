//! Finite paths, traces and stutter equivalence.

use std::collections::BTreeMap;

use num::{BigRational, One};

use super::exact::rational;
use crate::mdp::{Mdp, PropId, StateId};
use crate::synthesis::{InducedChain, ProductDtmc, Turn};

/// A finite path with its label trace and exact probability.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceSample {
    pub path: Vec<StateId>,
    pub trace: Vec<Vec<PropId>>,
    pub probability: BigRational,
}

/// Removes consecutive repetitions.
pub fn collapse<T: PartialEq + Clone>(trace: &[T]) -> Vec<T> {
    let mut out: Vec<T> = Vec::with_capacity(trace.len());
    for x in trace {
        if out.last() != Some(x) {
            out.push(x.clone());
        }
    }
    out
}

pub fn stutter_equivalent<T: PartialEq + Clone>(t1: &[T], t2: &[T]) -> bool {
    collapse(t1) == collapse(t2)
}

/// All paths of exactly `steps` transitions from `start` in a chain given
/// by its rows, labelled through `label`. Rows must be non-empty along the
/// way; paths hitting an empty row stop early.
pub fn enumerate_paths(
    rows: &[Vec<(StateId, f64)>],
    start: StateId,
    steps: usize,
    label: impl Fn(StateId) -> Vec<PropId>,
) -> Vec<TraceSample> {
    let mut out = Vec::new();
    let mut stack = vec![(vec![start], BigRational::one())];
    while let Some((path, prob)) = stack.pop() {
        let last = *path.last().expect("non-empty path");
        if path.len() > steps || rows[last].is_empty() {
            let trace = path.iter().map(|&s| label(s)).collect();
            out.push(TraceSample { path, trace, probability: prob });
            continue;
        }
        for &(t, p) in &rows[last] {
            let mut next = path.clone();
            next.push(t);
            stack.push((next, &prob * rational(p)));
        }
    }
    out
}

/// Projected path -> (total probability, label trace).
type PathTable = BTreeMap<Vec<(usize, StateId)>, (BigRational, Vec<Vec<PropId>>)>;

/// Checks that the paths of the protocol-induced chain and the product
/// correspond one to one.
///
/// Every induced path of `steps` transitions must be the projection, onto
/// its turn-two states, of exactly one product path, with the same
/// probability and a stutter-equivalent trace of model labels, and every
/// such product path must project onto an induced path. Returns the number
/// of path pairs matched.
pub fn check_product_correspondence(mdp: &Mdp, induced: &InducedChain, product: &ProductDtmc, steps: usize) -> Result<usize, String> {
    let labels = |s: StateId| mdp.labels(s).to_vec();

    // induced side, keyed by (objective, state) sequence
    let mut left: PathTable = BTreeMap::new();
    let start = induced.index_of(induced.pairs[0].0, induced.pairs[0].1).expect("initial pair");
    for t in enumerate_paths(&induced.chain.rows, start, steps, |i| labels(induced.pairs[i].1)) {
        let key: Vec<_> = t.path.iter().map(|&i| induced.pairs[i]).collect();
        let e = left.entry(key).or_insert((BigRational::from_integer(0.into()), t.trace.clone()));
        e.0 += t.probability;
    }

    // product side: extend until the projection has steps + 1 entries
    let mut right: PathTable = BTreeMap::new();
    let mut stack = vec![(vec![0usize], BigRational::one())];
    while let Some((path, prob)) = stack.pop() {
        let proj: Vec<(usize, StateId)> =
            path.iter().map(|&v| product.states[v]).filter(|ps| ps.turn == Turn::Two).map(|ps| (ps.objective, ps.state)).collect();
        let last = *path.last().expect("non-empty path");
        if proj.len() == steps + 1 && product.states[last].turn == Turn::Two {
            let trace: Vec<_> = path.iter().map(|&v| labels(product.states[v].state)).collect();
            let e = right.entry(proj).or_insert((BigRational::from_integer(0.into()), trace));
            e.0 += prob;
            continue;
        }
        if product.edges[last].is_empty() {
            return Err(format!("product state {last} has no successor"));
        }
        for e in &product.edges[last] {
            let mut next = path.clone();
            next.push(e.to);
            stack.push((next, &prob * rational(e.prob)));
        }
    }

    if left.len() != right.len() {
        return Err(format!("{} induced paths but {} product paths", left.len(), right.len()));
    }
    for (key, (p, trace)) in &left {
        let Some((q, ptrace)) = right.get(key) else {
            return Err(format!("induced path {key:?} has no product counterpart"));
        };
        if p != q {
            return Err(format!("path {key:?}: probability {p} vs {q}"));
        }
        if !stutter_equivalent(trace, ptrace) {
            return Err(format!("path {key:?}: traces are not stutter equivalent"));
        }
    }
    Ok(left.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stutter_examples() {
        assert!(stutter_equivalent(&["A", "A", "B"], &["A", "B", "B"]));
        assert!(!stutter_equivalent(&["A", "B"], &["B", "A"]));
        assert!(stutter_equivalent::<u8>(&[], &[]));
    }

    #[test]
    fn path_probabilities_sum_to_one() {
        let rows = vec![vec![(0, 0.5), (1, 0.5)], vec![(1, 1.0)]];
        let ps = enumerate_paths(&rows, 0, 3, |_| vec![]);
        let total: BigRational = ps.iter().map(|t| t.probability.clone()).sum();
        assert!(total.is_one());
        assert_eq!(ps.len(), 4);
    }
}
