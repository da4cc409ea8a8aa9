//! Strongly connected components of small successor-list digraphs.

/// Tarjan's algorithm, iterative. Each component is sorted, and components
/// are ordered by their smallest vertex.
pub fn strongly_connected_components(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = succ.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next = 0usize;

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        // (vertex, position in its successor list)
        let mut work = vec![(root, 0usize)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = work.last_mut() {
            if let Some(&w) = succ[v].get(*pos) {
                *pos += 1;
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            work.pop();
            if let Some(&(parent, _)) = work.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                comps.push(comp);
            }
        }
    }
    comps.sort_by_key(|c| c[0]);
    comps
}

/// Components with no arc leaving them (closed classes of the condensation).
pub fn terminal_components(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let comps = strongly_connected_components(succ);
    let mut comp_of = vec![0usize; succ.len()];
    for (c, members) in comps.iter().enumerate() {
        for &v in members {
            comp_of[v] = c;
        }
    }
    comps
        .iter()
        .enumerate()
        .filter(|(c, members)| members.iter().all(|&v| succ[v].iter().all(|&w| comp_of[w] == *c)))
        .map(|(_, members)| members.clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_and_tail() {
        // 0 -> 1 -> 2 -> 1, 3 isolated
        let succ = vec![vec![1], vec![2], vec![1], vec![]];
        assert_eq!(strongly_connected_components(&succ), vec![vec![0], vec![1, 2], vec![3]]);
        assert_eq!(terminal_components(&succ), vec![vec![1, 2], vec![3]]);
    }

    #[test]
    fn self_loops_are_singletons() {
        let succ = vec![vec![0], vec![1]];
        assert_eq!(terminal_components(&succ), vec![vec![0], vec![1]]);
    }

    #[test]
    fn long_chain_does_not_overflow() {
        let n = 100_000;
        let succ: Vec<Vec<usize>> = (0..n).map(|v| vec![(v + 1) % n]).collect();
        assert_eq!(strongly_connected_components(&succ).len(), 1);
    }

    #[test]
    fn terminal_components_agree_with_reachability() {
        // terminal: no vertex outside the component is reachable from it
        let succ = vec![vec![1, 2], vec![0], vec![3], vec![2], vec![4, 0]];
        for comp in terminal_components(&succ) {
            let mut seen = vec![false; succ.len()];
            let mut todo = vec![comp[0]];
            while let Some(v) = todo.pop() {
                if !std::mem::replace(&mut seen[v], true) {
                    todo.extend(&succ[v]);
                }
            }
            let reach: Vec<usize> = (0..succ.len()).filter(|&v| seen[v]).collect();
            assert_eq!(reach, comp);
        }
    }
}
