use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use crate::mdp::{Mdp, MdpBuilder};

/// Builds the MDP reachable from `init` breadth-first. `succ` lists the
/// enabled actions of a state with their distributions (repeated
/// successors are merged), `labels` its propositions and `name` its
/// display name. `actions` and `props` fix the table orders.
pub fn explore<K, S, L, N>(init: K, actions: &[&str], props: &[&str], succ: S, labels: L, name: N) -> Mdp
where
    K: Clone + Eq + Hash,
    S: Fn(&K) -> Vec<(&'static str, Vec<(K, f64)>)>,
    L: Fn(&K) -> Vec<&'static str>,
    N: Fn(&K) -> String,
{
    let mut keys = vec![init.clone()];
    let mut index = HashMap::from([(init, 0usize)]);
    let mut queue = VecDeque::from([0usize]);
    let mut moves = Vec::new();
    while let Some(i) = queue.pop_front() {
        let k = keys[i].clone();
        for (a, dist) in succ(&k) {
            let mut branches: Vec<(usize, f64)> = Vec::new();
            for (t, p) in dist {
                if p <= 0.0 {
                    continue;
                }
                let j = *index.entry(t.clone()).or_insert_with(|| {
                    keys.push(t);
                    queue.push_back(keys.len() - 1);
                    keys.len() - 1
                });
                match branches.iter_mut().find(|(s, _)| *s == j) {
                    Some(b) => b.1 += p,
                    None => branches.push((j, p)),
                }
            }
            moves.push((i, a, branches));
        }
    }
    let mut b = MdpBuilder::new(keys.len(), 0);
    for a in actions {
        b.action(a);
    }
    for p in props {
        b.prop(p);
    }
    for (i, k) in keys.iter().enumerate() {
        for l in labels(k) {
            b.label(i, l);
        }
        b.name(i, name(k));
    }
    for (i, a, branches) in moves {
        b.transition(i, a, &branches);
    }
    b.build().expect("generated model is valid")
}
