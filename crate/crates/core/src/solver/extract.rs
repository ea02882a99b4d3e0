use std::collections::VecDeque;

use crate::cost::Cost;
use crate::error::SolveError;
use crate::graph::{self, ArcId, ArcSet, BranchingCover};

use super::state::SolverState;
use super::trace::TraceEvent;

impl SolverState<'_> {
    /// Turns the root-connected part of `T0` into a minimal branching
    /// cover and records how its cost splits between the greedy covering
    /// arcs and the rest.
    ///
    /// If that part is not a cover yet, it is first grown along `A0` from
    /// the nodes it reaches. Leaf arcs are then pruned, most expensive
    /// first, while the cover property survives.
    pub fn extract_tree(&mut self) -> Result<BranchingCover, SolveError> {
        let g = self.graph;
        let mut reached = self.tree_reached();
        for v in g.nodes() {
            if !reached[v] {
                self.parent[v] = None;
            }
        }
        self.parent[self.root] = None;

        if !graph::is_vertex_cover_mask(g, &reached) {
            let mut queue: VecDeque<_> = g.nodes().filter(|&v| reached[v]).collect();
            let mut attached = 0;
            while let Some(x) = queue.pop_front() {
                for &a in g.out_arcs(x) {
                    let y = g.arc(a).head;
                    if self.a0[a] && !reached[y] {
                        reached[y] = true;
                        self.parent[y] = Some(a);
                        attached += 1;
                        queue.push_back(y);
                    }
                }
            }
            self.trace.push(TraceEvent::TreeRepaired { attached });
            if !graph::is_vertex_cover_mask(g, &reached) {
                return Err(SolveError::Invariant(format!(
                    "saturated arcs reachable from root {} do not cover the graph",
                    self.root
                )));
            }
        }

        let pruned = self.prune(&mut reached);
        if !pruned.is_empty() {
            self.trace.push(TraceEvent::Pruned { arcs: pruned });
        }

        let tree: ArcSet = self.parent.iter().flatten().copied().collect();
        let c2: Cost = self
            .covering
            .iter()
            .filter(|(a, _)| tree.contains(*a))
            .map(|(_, c)| c)
            .sum();
        let cover = BranchingCover::new(g, self.root, tree);
        self.ledger.c1_total = cover.total_cost.checked_sub(&c2)?;
        self.ledger.c2_total = c2;
        debug_assert_eq!(reached.iter().filter(|&&r| r).count(), cover.tree_arcs.len() + 1);
        Ok(cover)
    }

    /// Removes leaf arcs in order of decreasing cost, then decreasing
    /// index, until none can go without uncovering an arc.
    fn prune(&mut self, reached: &mut [bool]) -> Vec<ArcId> {
        let g = self.graph;
        let mut children = vec![0usize; g.node_count()];
        for a in self.parent.iter().flatten() {
            children[g.arc(*a).tail] += 1;
        }
        let mut removed = Vec::new();
        loop {
            let mut order: Vec<ArcId> = self.parent.iter().flatten().copied().collect();
            order.sort_by(|&a, &b| (&g.arc(b).cost, b).cmp(&(&g.arc(a).cost, a)));
            let mut changed = false;
            for a in order {
                let h = g.arc(a).head;
                let t = g.arc(a).tail;
                if children[h] > 0 {
                    continue;
                }
                // Without `a`, `h` leaves the tree, and so does `t` when it
                // is neither the root nor attached to anything else.
                let t_stays = t == self.root || self.parent[t].is_some() || children[t] > 1;
                let lost = |v| v == h || (v == t && !t_stays);
                let covered = |v| reached[v] && !lost(v);
                let ok = [h, t].into_iter().filter(|&v| lost(v)).all(|v| {
                    g.in_arcs(v)
                        .iter()
                        .map(|&e| g.arc(e).tail)
                        .chain(g.out_arcs(v).iter().map(|&e| g.arc(e).head))
                        .all(covered)
                });
                if !ok {
                    continue;
                }
                self.parent[h] = None;
                children[t] -= 1;
                reached[h] = false;
                if !t_stays {
                    reached[t] = false;
                }
                removed.push(a);
                changed = true;
            }
            if !changed {
                return removed;
            }
        }
    }
}
