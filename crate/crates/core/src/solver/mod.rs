//! The three-phase primal-dual solver.
//!
//! For a fixed root the run covers every two-set and strongly connected
//! set of the saturated subgraph, buys the remaining critical nodes
//! greedily as a weighted set cover, and finally connects whatever is
//! still unreachable by covering Edmonds connected subgraphs. Every dual
//! raise is logged in a [`DualLedger`], whose objective is a lower bound
//! on the optimum.

mod classify;
mod extract;
mod ledger;
mod phase1;
mod phase2;
mod phase3;
mod span;
mod state;
mod trace;

use rayon::prelude::*;

pub use classify::NodeClassification;
pub use ledger::{DualLedger, Family, LedgerEntry};
pub use phase2::{CandidateKind, GreedyCandidate};
pub use state::SolverState;
pub use trace::TraceEvent;

use crate::cost::{ratio_bound, Cost};
use crate::error::SolveError;
use crate::graph::{ArcSet, BranchingCover, Digraph, NodeId};

/// Outcome of one rooted run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub root: NodeId,
    pub tree: BranchingCover,
    /// Equal to `ledger.objective`.
    pub dual_lower_bound: Cost,
    pub ledger: DualLedger,
    pub g_param: usize,
    pub h_g: Cost,
    /// `max(2, h_g)`.
    pub ratio_bound: Cost,
    /// `None` when the first phase alone produced a cover.
    pub classification: Option<NodeClassification>,
    /// Saturated arcs at the end of the first phase.
    pub phase1_a0: ArcSet,
    pub phase_trace: Vec<TraceEvent>,
}

impl SolveResult {
    /// Whether the greedy phase ran.
    pub fn used_greedy(&self) -> bool {
        self.classification.is_some()
    }
}

/// Runs the solver for a single root.
pub fn solve_root(g: &Digraph, root: NodeId) -> Result<SolveResult, SolveError> {
    let mut st = SolverState::initialize(g, root)?;
    st.phase1()?;
    st.build_phase1_tree();
    let phase1_a0 = st.a0();
    if !st.t0_is_cover() {
        st.phase2()?;
        st.reconcile_reduced_costs()?;
        if !st.t0_is_cover() {
            st.phase3()?;
        }
    }
    let tree = st.extract_tree()?;
    Ok(SolveResult {
        root,
        dual_lower_bound: st.ledger.objective.clone(),
        ratio_bound: ratio_bound(&st.h_g),
        g_param: st.g_param,
        h_g: st.h_g.clone(),
        classification: st.classification.take(),
        ledger: std::mem::take(&mut st.ledger),
        phase1_a0,
        phase_trace: std::mem::take(&mut st.trace),
        tree,
    })
}

/// Solves every root (in parallel on the current rayon pool) and keeps
/// the cheapest cover, ties going to the smaller root.
pub fn solve(g: &Digraph) -> Result<SolveResult, SolveError> {
    let results: Vec<Result<SolveResult, SolveError>> =
        g.nodes().into_par_iter().map(|r| solve_root(g, r)).collect();
    pick_best(results)
}

/// Cheapest feasible result; invariant failures are propagated, and
/// `Infeasible` is returned when every root is infeasible.
pub fn pick_best(
    results: impl IntoIterator<Item = Result<SolveResult, SolveError>>,
) -> Result<SolveResult, SolveError> {
    let mut best: Option<SolveResult> = None;
    for res in results {
        match res {
            Ok(r) => {
                let better = best
                    .as_ref()
                    .is_none_or(|b| (&r.tree.total_cost, r.root) < (&b.tree.total_cost, b.root));
                if better {
                    best = Some(r);
                }
            }
            Err(SolveError::InfeasibleRoot { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    best.ok_or(SolveError::Infeasible)
}
