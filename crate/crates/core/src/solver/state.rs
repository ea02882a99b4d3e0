use std::collections::{HashSet, VecDeque};

use crate::cost::{harmonic, Cost};
use crate::error::SolveError;
use crate::graph::{self, ArcId, ArcSet, Digraph, NodeId, NodeSet};

use super::classify::NodeClassification;
use super::ledger::DualLedger;
use super::trace::TraceEvent;

/// Mutable state of one rooted solve.
///
/// The partial tree `T0` is stored as a parent-arc array, so every node has
/// at most one tree arc entering it at all times.
#[derive(Clone, Debug)]
pub struct SolverState<'g> {
    pub(crate) graph: &'g Digraph,
    pub(crate) root: NodeId,
    pub(crate) reduced: Vec<Cost>,
    pub(crate) a0: Vec<bool>,
    pub(crate) parent: Vec<Option<ArcId>>,
    pub(crate) pending: VecDeque<NodeSet>,
    pub(crate) seen: HashSet<NodeSet>,
    /// Vertex sets of every nontrivial strongly connected component of
    /// `(V, A0)` detected in the cut-covering phase, in detection order.
    pub(crate) scc_sets: Vec<NodeSet>,
    /// Sets covered in the Edmonds phase, in order.
    pub(crate) edmonds_sets: Vec<NodeSet>,
    pub(crate) ledger: DualLedger,
    pub(crate) classification: Option<NodeClassification>,
    pub(crate) g_param: usize,
    pub(crate) h_g: Cost,
    /// Greedy-phase covering arcs with the reduced cost they were priced at.
    pub(crate) covering: Vec<(ArcId, Cost)>,
    pub(crate) trace: Vec<TraceEvent>,
}

impl<'g> SolverState<'g> {
    /// Reduced costs start at `c`, `A0` holds the zero-cost arcs, and the
    /// pending queue is seeded with every arc's endpoint pair not touching
    /// the root (arc-index order) followed by the nontrivial strongly
    /// connected components of `A0` that avoid the root.
    pub fn initialize(graph: &'g Digraph, root: NodeId) -> Result<Self, SolveError> {
        let n = graph.node_count();
        if root >= n {
            return Err(SolveError::InvalidRoot { root, node_count: n });
        }
        let reduced: Vec<Cost> = graph.arcs().iter().map(|a| a.cost.clone()).collect();
        let a0: Vec<bool> = reduced.iter().map(Cost::is_zero).collect();
        let mut state = SolverState {
            graph,
            root,
            reduced,
            a0,
            parent: vec![None; n],
            pending: VecDeque::new(),
            seen: HashSet::new(),
            scc_sets: Vec::new(),
            edmonds_sets: Vec::new(),
            ledger: DualLedger::new(),
            classification: None,
            g_param: 1,
            h_g: harmonic(1),
            covering: Vec::new(),
            trace: Vec::new(),
        };
        for arc in graph.arcs() {
            if arc.tail == root || arc.head == root {
                continue;
            }
            let pair = NodeSet::from([arc.tail, arc.head]);
            if state.seen.insert(pair.clone()) {
                state.pending.push_back(pair);
            }
        }
        state.enqueue_new_sccs();
        let zero_arcs = state.a0.iter().filter(|&&b| b).count();
        state.trace.push(TraceEvent::Initialized {
            pending: state.pending.len(),
            zero_arcs,
        });
        Ok(state)
    }

    /// Enqueues every nontrivial SCC of `(V, A0)` avoiding the root whose
    /// vertex set has not been enqueued before.
    pub(crate) fn enqueue_new_sccs(&mut self) {
        let all = vec![true; self.graph.node_count()];
        let cond = graph::scc_mask(self.graph, &self.a0, &all);
        for comp in cond.nontrivial() {
            if comp.contains(self.root) {
                continue;
            }
            if !self.scc_sets.contains(comp) {
                self.scc_sets.push(comp.clone());
            }
            if self.seen.insert(comp.clone()) {
                self.pending.push_back(comp.clone());
                self.trace.push(TraceEvent::SccEnqueued { set: comp.clone() });
            }
        }
    }

    pub fn graph(&self) -> &Digraph {
        self.graph
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn reduced(&self) -> &[Cost] {
        &self.reduced
    }

    pub fn a0(&self) -> ArcSet {
        ArcSet::from_mask(&self.a0)
    }

    /// Every arc currently in the partial tree, connected to the root or not.
    pub fn t0(&self) -> ArcSet {
        self.parent.iter().flatten().copied().collect()
    }

    pub fn pending(&self) -> Vec<NodeSet> {
        self.pending.iter().cloned().collect()
    }

    pub fn ledger(&self) -> &DualLedger {
        &self.ledger
    }

    pub fn classification(&self) -> Option<&NodeClassification> {
        self.classification.as_ref()
    }

    pub fn g_param(&self) -> usize {
        self.g_param
    }

    pub fn h_g(&self) -> &Cost {
        &self.h_g
    }

    pub fn trace(&self) -> &[TraceEvent] {
        &self.trace
    }

    pub(crate) fn reachable(&self) -> Vec<bool> {
        graph::reachable_mask(self.graph, &self.a0, self.root)
    }

    pub(crate) fn infeasible(&self, reason: impl Into<String>) -> SolveError {
        SolveError::InfeasibleRoot {
            root: self.root,
            reason: reason.into(),
        }
    }

    /// Tree children of every node, following the parent array.
    pub(crate) fn tree_children(&self) -> Vec<Vec<NodeId>> {
        let mut children = vec![Vec::new(); self.graph.node_count()];
        for (v, p) in self.parent.iter().enumerate() {
            if let Some(a) = p {
                children[self.graph.arc(*a).tail].push(v);
            }
        }
        children
    }

    /// Nodes whose parent chain leads back to the root.
    pub(crate) fn tree_reached(&self) -> Vec<bool> {
        let children = self.tree_children();
        let mut reached = vec![false; self.graph.node_count()];
        reached[self.root] = true;
        let mut stack = vec![self.root];
        while let Some(x) = stack.pop() {
            for &y in &children[x] {
                if !reached[y] {
                    reached[y] = true;
                    stack.push(y);
                }
            }
        }
        reached
    }

    /// Whether the root-connected part of `T0` already touches every arc.
    pub fn t0_is_cover(&self) -> bool {
        graph::is_vertex_cover_mask(self.graph, &self.tree_reached())
    }

    /// Arcs of `T0` reachable from the root through `T0`.
    pub fn rooted_t0(&self) -> ArcSet {
        let reached = self.tree_reached();
        self.parent
            .iter()
            .enumerate()
            .filter(|(v, _)| reached[*v])
            .filter_map(|(_, p)| *p)
            .collect()
    }

    /// Lowers the reduced cost of every arc of `cut` by `alpha` and moves
    /// the arcs that reach zero into `A0`. Returns the newly saturated arcs.
    pub(crate) fn charge_cut(&mut self, cut: &[ArcId], alpha: &Cost) -> Result<Vec<ArcId>, SolveError> {
        let mut saturated = Vec::new();
        for &a in cut {
            self.reduced[a] = self.reduced[a].checked_sub(alpha)?;
            if self.reduced[a].is_zero() && !self.a0[a] {
                self.a0[a] = true;
                saturated.push(a);
            }
        }
        Ok(saturated)
    }
}
