//! Connecting what the greedy phase left unreachable by covering Edmonds
//! connected subgraphs of the saturated arcs.

use std::collections::VecDeque;

use crate::cost::Cost;
use crate::error::SolveError;
use crate::graph::{self, ArcId, NodeId, NodeSet};

use super::ledger::Family;
use super::span::laminar;
use super::state::SolverState;
use super::trace::TraceEvent;

impl SolverState<'_> {
    /// Recomputes every reduced cost from the original costs and the whole
    /// ledger, then moves every arc whose reduced cost is zero into `A0`.
    pub fn reconcile_reduced_costs(&mut self) -> Result<(), SolveError> {
        let g = self.graph;
        let mut load = vec![Cost::zero(); g.arc_count()];
        for entry in &self.ledger.entries {
            let inside = entry.set.mask(g.node_count());
            for a in graph::in_cut_mask(g, &inside) {
                load[a] += &entry.value;
            }
        }
        let mut newly_zero = 0;
        for (a, arc) in g.arcs().iter().enumerate() {
            self.reduced[a] = arc.cost.checked_sub(&load[a]).map_err(|_| {
                SolveError::Invariant(format!(
                    "dual load {} exceeds the cost {} of arc {a}",
                    load[a], arc.cost
                ))
            })?;
            if self.reduced[a].is_zero() && !self.a0[a] {
                self.a0[a] = true;
                newly_zero += 1;
            }
        }
        self.trace.push(TraceEvent::Reconciled { newly_zero });
        Ok(())
    }

    fn u_set(&self) -> Result<&NodeSet, SolveError> {
        self.classification
            .as_ref()
            .map(|c| &c.u_set)
            .ok_or_else(|| SolveError::Invariant("nodes not classified".into()))
    }

    fn u_set_reachable(&self) -> Result<bool, SolveError> {
        let reach = self.reachable();
        Ok(self.u_set()?.iter().all(|v| reach[v]))
    }

    /// Picks a topologically earliest strongly connected component `K` of
    /// the saturated arcs among the unreachable nodes that holds a node of
    /// `U` (smallest node first), and returns `K` with all its ancestors.
    /// No saturated arc enters the result, and every node in it reaches
    /// every `U` node in it without leaving it.
    pub fn find_uncovered_edmonds(&self) -> Result<NodeSet, SolveError> {
        let u = self.u_set()?;
        let outside: Vec<bool> = self.reachable().iter().map(|r| !r).collect();
        let cond = graph::scc_mask(self.graph, &self.a0, &outside);
        let preds = cond.predecessors();
        let ancestors = |k: usize| -> Vec<usize> {
            let mut seen = vec![false; cond.components.len()];
            let mut stack = vec![k];
            let mut out = Vec::new();
            seen[k] = true;
            while let Some(c) = stack.pop() {
                out.push(c);
                for &p in &preds[c] {
                    if !seen[p] {
                        seen[p] = true;
                        stack.push(p);
                    }
                }
            }
            out
        };
        let holds_u = |c: usize| cond.components[c].iter().any(|v| u.contains(v));
        for k in 0..cond.components.len() {
            let first = cond.components[k].first().expect("components are nonempty");
            if !outside[first] || !holds_u(k) {
                continue;
            }
            let closure = ancestors(k);
            if closure.iter().any(|&c| c != k && holds_u(c)) {
                continue;
            }
            let mut b = NodeSet::new();
            for c in closure {
                b.union_with(&cond.components[c]);
            }
            return Ok(b);
        }
        Err(SolveError::Invariant(
            "no unreachable component holds a node that must be reached".into(),
        ))
    }

    /// Raises the dual of `b` until an arc entering it saturates, enters
    /// `b` through one saturated arc (preferring a root-reachable tail),
    /// spans what that reaches inside `b`, and hangs the sink chains below.
    pub fn cover_edmonds(&mut self, b: &NodeSet) -> Result<(), SolveError> {
        let g = self.graph;
        let n = g.node_count();
        let inside = b.mask(n);
        let cut: Vec<ArcId> = graph::in_cut_mask(g, &inside).collect();
        let Some(alpha) = cut.iter().map(|&a| &self.reduced[a]).min().cloned() else {
            return Err(self.infeasible(format!(
                "no arc enters {{{}}}",
                b.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
            )));
        };
        if alpha.is_zero() || cut.iter().any(|&a| self.a0[a]) {
            return Err(SolveError::Invariant(format!("set {b:?} is already entered")));
        }
        let reach_before = self.reachable();
        let saturated = self.charge_cut(&cut, &alpha)?;
        self.ledger.push(b.clone(), alpha.clone(), Family::B);
        let entry = saturated
            .iter()
            .copied()
            .min_by_key(|&a| (!reach_before[g.arc(a).tail], a))
            .ok_or_else(|| SolveError::Invariant("covering a set saturated nothing".into()))?;
        let v = g.arc(entry).head;
        self.parent[v] = Some(entry);

        let family = laminar(
            self.scc_sets
                .iter()
                .chain(&self.edmonds_sets)
                .filter(|s| s.is_subset(b)),
        );
        let mut reached = vec![false; n];
        self.span_laminar(b, v, &family, &mut reached);
        self.edmonds_sets.push(b.clone());
        self.hang_sink_chains(b);
        self.trace.push(TraceEvent::EdmondsCovered {
            set: b.clone(),
            alpha,
            entry,
        });
        Ok(())
    }

    /// Follows the `A0` arcs from `b` through sink nodes outside it, giving
    /// each sink its unique saturated in-arc unless it already has a tree
    /// arc.
    fn hang_sink_chains(&mut self, b: &NodeSet) {
        let Some(c) = self.classification.as_ref() else {
            return;
        };
        let g = self.graph;
        let mut visited = b.mask(g.node_count());
        let mut queue: VecDeque<NodeId> = b.iter().collect();
        let mut conflicts = Vec::new();
        let mut links = Vec::new();
        while let Some(x) = queue.pop_front() {
            for &a in g.out_arcs(x) {
                let y = g.arc(a).head;
                if visited[y] || c.sink_arcs.get(&y) != Some(&a) {
                    continue;
                }
                visited[y] = true;
                links.push((y, a));
                queue.push_back(y);
            }
        }
        for (y, a) in links {
            match self.parent[y] {
                None => self.parent[y] = Some(a),
                Some(existing) if existing == a => {}
                Some(_) => conflicts.push(TraceEvent::SinkChainConflict { node: y, arc: a }),
            }
        }
        self.trace.extend(conflicts);
    }

    /// Covers Edmonds subgraphs until every node of `U` is reachable from
    /// the root through `A0`.
    pub fn phase3(&mut self) -> Result<(), SolveError> {
        if self.classification.is_none() {
            self.classification = Some(self.classify());
        }
        let limit = self.graph.arc_count() + 1;
        let mut rounds = 0;
        while !self.u_set_reachable()? {
            if rounds == limit {
                return Err(SolveError::Invariant("edmonds phase did not terminate".into()));
            }
            let b = self.find_uncovered_edmonds()?;
            self.cover_edmonds(&b)?;
            rounds += 1;
        }
        Ok(())
    }
}
