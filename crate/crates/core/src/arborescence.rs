//! Minimum-cost spanning arborescence by cycle contraction (Chu-Liu and
//! Edmonds). Only the vertex-set oracle uses it.

use crate::cost::Cost;

/// Indices into `arcs` (`(tail, head, cost)` over nodes `0..n`) of a
/// cheapest arborescence rooted at `root` that spans every node, sorted,
/// or `None` when some node cannot be reached. Ties go to lower indices.
pub fn min_arborescence(n: usize, root: usize, arcs: &[(usize, usize, Cost)]) -> Option<Vec<usize>> {
    let mut out = contract(n, root, arcs)?;
    out.sort_unstable();
    Some(out)
}

fn contract(n: usize, root: usize, arcs: &[(usize, usize, Cost)]) -> Option<Vec<usize>> {
    let mut best_in: Vec<Option<usize>> = vec![None; n];
    for (i, (t, h, c)) in arcs.iter().enumerate() {
        if *h == root || t == h {
            continue;
        }
        if best_in[*h].is_none_or(|j| *c < arcs[j].2) {
            best_in[*h] = Some(i);
        }
    }
    if (0..n).any(|v| v != root && best_in[v].is_none()) {
        return None;
    }
    let pred = |v: usize| arcs[best_in[v].expect("checked above")].0;

    // Walk the chosen in-arcs backwards from each node until the root, a
    // node seen on an earlier walk, or a node of this walk (a cycle).
    let mut stamp = vec![usize::MAX; n];
    let mut cycle = None;
    for s in 0..n {
        let mut path = Vec::new();
        let mut v = s;
        while v != root && stamp[v] == usize::MAX {
            stamp[v] = s;
            path.push(v);
            v = pred(v);
        }
        if v != root && stamp[v] == s {
            let at = path.iter().position(|&x| x == v).expect("v is on this walk");
            cycle = Some(path.split_off(at));
            break;
        }
    }
    let Some(cycle) = cycle else {
        return Some((0..n).filter(|&v| v != root).filter_map(|v| best_in[v]).collect());
    };

    let mut on_cycle = vec![false; n];
    for &v in &cycle {
        on_cycle[v] = true;
    }
    let mut id = vec![0; n];
    let mut k = 0;
    for v in 0..n {
        if !on_cycle[v] {
            id[v] = k;
            k += 1;
        }
    }
    for &v in &cycle {
        id[v] = k;
    }
    let mut sub = Vec::new();
    let mut origin = Vec::new();
    for (i, (t, h, c)) in arcs.iter().enumerate() {
        if on_cycle[*t] && on_cycle[*h] {
            continue;
        }
        let c = if on_cycle[*h] {
            let inner = &arcs[best_in[*h].expect("cycle nodes have in-arcs")].2;
            c.checked_sub(inner).expect("the chosen in-arc is the cheapest")
        } else {
            c.clone()
        };
        sub.push((id[*t], id[*h], c));
        origin.push(i);
    }
    let mut out: Vec<usize> = contract(k + 1, id[root], &sub)?
        .into_iter()
        .map(|j| origin[j])
        .collect();
    let entered = out
        .iter()
        .map(|&i| arcs[i].1)
        .find(|&h| on_cycle[h])
        .expect("the contracted node is entered");
    out.extend(
        cycle
            .iter()
            .filter(|&&v| v != entered)
            .filter_map(|&v| best_in[v]),
    );
    Some(out)
}
