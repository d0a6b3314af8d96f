//! Exact reachability in Markov chains over the rationals.

use num::{BigRational, One, Signed, Zero};

use crate::mdp::{StateId, StateSet};
use crate::pctl::{Dtmc, EngineError};

/// Largest chain [`exact_dtmc_reach`] accepts.
pub const EXACT_LIMIT: usize = 2000;

/// Exact value of a binary floating-point probability.
pub fn rational(p: f64) -> BigRational {
    BigRational::from_float(p).expect("finite probability")
}

pub fn to_f64(x: &BigRational) -> f64 {
    num::ToPrimitive::to_f64(x).expect("representable value")
}

/// States that can reach `target` (including `target` itself).
fn can_reach(rows: &[Vec<(StateId, f64)>], target: &[bool]) -> Vec<bool> {
    let n = rows.len();
    let mut yes = target.to_vec();
    let mut changed = true;
    while changed {
        changed = false;
        for s in 0..n {
            if !yes[s] && rows[s].iter().any(|&(t, p)| p > 0.0 && yes[t]) {
                yes[s] = true;
                changed = true;
            }
        }
    }
    yes
}

/// Probability of reaching `target` from every state of `chain`, computed
/// exactly from the chain's (exact binary) transition probabilities.
pub fn exact_dtmc_reach(chain: &Dtmc, target: &StateSet) -> Result<Vec<BigRational>, EngineError> {
    let n = chain.num_states();
    if n > EXACT_LIMIT {
        return Err(EngineError::TooLarge(format!("{n} states for an exact solve (limit {EXACT_LIMIT})")));
    }
    let tgt: Vec<bool> = (0..n).map(|s| target.contains(s)).collect();
    let positive = can_reach(&chain.rows, &tgt);
    // a state reaches the target surely iff it cannot reach a zero state
    // while avoiding the target
    let zero: Vec<bool> = positive.iter().map(|p| !p).collect();
    let mut avoid_rows = chain.rows.clone();
    for s in 0..n {
        if tgt[s] {
            avoid_rows[s].clear();
        }
    }
    let risky = can_reach(&avoid_rows, &zero);
    let sure: Vec<bool> = (0..n).map(|s| tgt[s] || !risky[s]).collect();

    let maybe: Vec<StateId> = (0..n).filter(|&s| positive[s] && !sure[s]).collect();
    let mut index = vec![usize::MAX; n];
    for (i, &s) in maybe.iter().enumerate() {
        index[s] = i;
    }
    let m = maybe.len();
    let mut a = vec![vec![BigRational::zero(); m + 1]; m];
    for (i, &s) in maybe.iter().enumerate() {
        a[i][i] += BigRational::one();
        for &(t, p) in &chain.rows[s] {
            let p = rational(p);
            if index[t] != usize::MAX {
                a[i][index[t]] -= p;
            } else if sure[t] {
                a[i][m] += p;
            }
        }
    }
    for col in 0..m {
        let pivot = (col..m).find(|&r| !a[r][col].is_zero()).ok_or(EngineError::Singular)?;
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for v in &mut a[col][col..=m] {
            *v = &*v * &inv;
        }
        for r in 0..m {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col][col..=m].to_vec();
                for (v, p) in a[r][col..=m].iter_mut().zip(&pivot_row) {
                    *v -= &f * p;
                }
            }
        }
    }
    let mut x = vec![BigRational::zero(); n];
    for s in 0..n {
        if sure[s] {
            x[s] = BigRational::one();
        }
    }
    for (i, &s) in maybe.iter().enumerate() {
        debug_assert!(!a[i][m].is_negative());
        x[s] = a[i][m].clone();
    }
    Ok(x)
}
