//! Growing tree arcs over `A0` so that each member of a laminar family of
//! node sets is entered at most once.

use std::collections::VecDeque;

use crate::graph::{NodeId, NodeSet};

use super::state::SolverState;

/// Keeps, in order, each set that nests with or is disjoint from every
/// set kept before it.
pub(crate) fn laminar<'a>(sets: impl IntoIterator<Item = &'a NodeSet>) -> Vec<NodeSet> {
    let mut kept: Vec<NodeSet> = Vec::new();
    for s in sets {
        let fits = kept
            .iter()
            .all(|k| k.is_subset(s) || s.is_subset(k) || !k.iter().any(|v| s.contains(v)));
        if fits && !kept.contains(s) {
            kept.push(s.clone());
        }
    }
    kept
}

impl SolverState<'_> {
    /// Breadth-first search from `entry` over the `A0` arcs inside
    /// `region`. Each maximal family member strictly inside the region is
    /// a block: the search enters it once, spans it recursively from the
    /// entry node, and continues only from the nodes that reached. Sets
    /// the parent arc of every node entered and marks it in `reached`.
    pub(crate) fn span_laminar(
        &mut self,
        region: &NodeSet,
        entry: NodeId,
        family: &[NodeSet],
        reached: &mut [bool],
    ) {
        let g = self.graph;
        let n = g.node_count();
        let inner: Vec<&NodeSet> = family
            .iter()
            .filter(|f| f.len() < region.len() && f.is_subset(region))
            .collect();
        let maximal: Vec<&NodeSet> = inner
            .iter()
            .filter(|f| !inner.iter().any(|o| o.len() > f.len() && f.is_subset(o)))
            .copied()
            .collect();

        const NONE: usize = usize::MAX;
        // Block id: index into `maximal`, or `maximal.len() + v` for loose nodes.
        let mut block = vec![NONE; n];
        for v in region.iter() {
            block[v] = maximal.len() + v;
        }
        for (i, set) in maximal.iter().enumerate() {
            for v in set.iter() {
                block[v] = i;
            }
        }
        let mut visited = vec![false; maximal.len() + n];
        let mut queue = VecDeque::new();
        let mut entering = vec![(block[entry], entry)];
        visited[block[entry]] = true;
        loop {
            for (b, y) in entering.drain(..) {
                if b < maximal.len() {
                    self.span_laminar(maximal[b], y, family, reached);
                    queue.extend(maximal[b].iter().filter(|&x| reached[x]));
                } else {
                    reached[y] = true;
                    queue.push_back(y);
                }
            }
            let Some(x) = queue.pop_front() else {
                return;
            };
            for &a in g.out_arcs(x) {
                if !self.a0[a] {
                    continue;
                }
                let y = g.arc(a).head;
                let by = block[y];
                if by == NONE || visited[by] {
                    continue;
                }
                visited[by] = true;
                self.parent[y] = Some(a);
                entering.push((by, y));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::laminar;
    use crate::graph::NodeSet;

    #[test]
    fn crossing_sets_are_dropped() {
        let sets = [
            NodeSet::from([1, 2]),
            NodeSet::from([2, 3]),
            NodeSet::from([1, 2, 3]),
            NodeSet::from([4]),
            NodeSet::from([1, 2]),
        ];
        assert_eq!(
            laminar(&sets),
            vec![
                NodeSet::from([1, 2]),
                NodeSet::from([1, 2, 3]),
                NodeSet::from([4])
            ]
        );
    }
}
