//! Covering every two-set and strongly connected component of the
//! saturated subgraph, then spanning its root-reachable part.

use crate::error::SolveError;
use crate::graph::{self, NodeSet};

use super::span::laminar;
use super::state::SolverState;
use super::trace::TraceEvent;

impl SolverState<'_> {
    /// Drains the pending queue. Each popped set with no `A0` arc entering
    /// it has its dual raised to the cheapest reduced cost on its in-cut,
    /// saturating at least one arc. Every growth of `A0` re-enqueues the
    /// new nontrivial strongly connected components.
    pub fn phase1(&mut self) -> Result<(), SolveError> {
        let g = self.graph;
        while let Some(set) = self.pending.pop_front() {
            let inside = set.mask(g.node_count());
            let cut: Vec<_> = graph::in_cut_mask(g, &inside).collect();
            if cut.iter().any(|&a| self.a0[a]) {
                continue;
            }
            let Some(alpha) = cut.iter().map(|&a| &self.reduced[a]).min().cloned() else {
                return Err(self.infeasible(format!(
                    "no arc enters {{{}}}",
                    set.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
                )));
            };
            if alpha.is_zero() {
                return Err(SolveError::Invariant(format!(
                    "zero reduced-cost arc outside A0 enters {set:?}"
                )));
            }
            let saturated = self.charge_cut(&cut, &alpha)?;
            self.ledger.push(set.clone(), alpha.clone(), super::Family::B);
            self.trace.push(TraceEvent::CutCovered {
                set,
                alpha,
                saturated: saturated.clone(),
            });
            if !saturated.is_empty() {
                self.enqueue_new_sccs();
            }
        }
        Ok(())
    }

    /// Builds `T0` as an arborescence of the root-reachable part of
    /// `(V, A0)` that enters every detected strongly connected component
    /// exactly once.
    pub fn build_phase1_tree(&mut self) {
        let reach = self.reachable();
        let family = laminar(
            self.scc_sets
                .iter()
                .filter(|s| s.first().is_some_and(|v| reach[v])),
        );
        self.parent.iter_mut().for_each(|p| *p = None);
        let mut reached = vec![false; self.graph.node_count()];
        self.span_laminar(&NodeSet::from_mask(&reach), self.root, &family, &mut reached);
        let is_cover = graph::is_vertex_cover_mask(self.graph, &reach);
        self.trace.push(TraceEvent::Phase1Done {
            a0_size: self.a0.iter().filter(|&&b| b).count(),
            reachable: reach.iter().filter(|&&b| b).count(),
            is_cover,
        });
    }
}
