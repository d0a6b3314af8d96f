use std::collections::VecDeque;

use super::{Mdp, ModelError, StateId, StateSet};

/// All states reachable from `s` under any strategy; always contains `s`.
pub fn reach(mdp: &Mdp, s: StateId) -> Result<StateSet, ModelError> {
    mdp.check_state(s)?;
    Ok(reach_within(mdp, [s], None))
}

/// Forward closure from `starts`, optionally never leaving `within`.
pub fn reach_within<I>(mdp: &Mdp, starts: I, within: Option<&StateSet>) -> StateSet
where
    I: IntoIterator<Item = StateId>,
{
    let mut seen = StateSet::empty(mdp.num_states());
    let mut queue = VecDeque::new();
    for s in starts {
        if within.is_none_or(|w| w.contains(s)) && seen.insert(s) {
            queue.push_back(s);
        }
    }
    while let Some(s) = queue.pop_front() {
        for c in mdp.choices(s) {
            for t in c.successors() {
                if within.is_none_or(|w| w.contains(t)) && seen.insert(t) {
                    queue.push_back(t);
                }
            }
        }
    }
    seen
}

/// Strongly connected components of the graph restricted to `nodes`.
///
/// `succ(v, out)` pushes the successors of `v`; successors outside `nodes`
/// are ignored. Components come out in reverse topological order (a
/// component is emitted before any component that can reach it), each sorted
/// ascending. Iterative, so deep graphs do not overflow the stack.
pub fn sccs<F>(universe: usize, nodes: &[usize], mut succ: F) -> Vec<Vec<usize>>
where
    F: FnMut(usize, &mut Vec<usize>),
{
    const UNVISITED: usize = usize::MAX;
    let mut member = vec![false; universe];
    for &v in nodes {
        member[v] = true;
    }
    let mut index = vec![UNVISITED; universe];
    let mut low = vec![0usize; universe];
    let mut on_stack = vec![false; universe];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut next_index = 0;
    // call frames: (node, successor list, position)
    let mut frames: Vec<(usize, Vec<usize>, usize)> = Vec::new();

    for &root in nodes {
        if index[root] != UNVISITED {
            continue;
        }
        let mut buf = Vec::new();
        succ(root, &mut buf);
        buf.retain(|&w| member[w]);
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        frames.push((root, buf, 0));

        while let Some(frame) = frames.last_mut() {
            let v = frame.0;
            if frame.2 < frame.1.len() {
                let w = frame.1[frame.2];
                frame.2 += 1;
                if index[w] == UNVISITED {
                    let mut buf = Vec::new();
                    succ(w, &mut buf);
                    buf.retain(|&x| member[x]);
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, buf, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                frames.pop();
                if let Some(parent) = frames.last() {
                    let p = parent.0;
                    low[p] = low[p].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    out.push(comp);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdp::MdpBuilder;

    #[test]
    fn absorbing_and_chain() {
        let mut b = MdpBuilder::new(3, 0);
        b.transition(0, "a", &[(1, 1.0)]).transition(1, "a", &[(2, 1.0)]);
        let m = b.build().unwrap();
        assert_eq!(reach(&m, 2).unwrap().to_vec(), vec![2]);
        assert_eq!(reach(&m, 0).unwrap().to_vec(), vec![0, 1, 2]);
        assert!(reach(&m, 7).is_err());
    }

    #[test]
    fn scc_cycles() {
        let edges: Vec<Vec<usize>> = vec![vec![1], vec![2], vec![0, 3], vec![4], vec![3], vec![]];
        let nodes: Vec<usize> = (0..6).collect();
        let comps = sccs(6, &nodes, |v, out| out.extend(&edges[v]));
        let mut sorted = comps.clone();
        sorted.sort();
        assert_eq!(sorted, vec![vec![0, 1, 2], vec![3, 4], vec![5]]);
        // {3,4} is emitted before {0,1,2}, which reaches it
        let pos = |c: &[usize]| comps.iter().position(|x| x == c).unwrap();
        assert!(pos(&[3, 4]) < pos(&[0, 1, 2]));
    }

    #[test]
    fn scc_restricted() {
        let edges: Vec<Vec<usize>> = vec![vec![1], vec![0]];
        let comps = sccs(2, &[0], |v, out| out.extend(&edges[v]));
        assert_eq!(comps, vec![vec![0]]);
    }
}
