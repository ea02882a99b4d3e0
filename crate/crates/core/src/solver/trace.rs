use std::fmt;

use crate::cost::Cost;
use crate::graph::{ArcId, NodeId, NodeSet};

/// One structured step of a solver run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceEvent {
    Initialized {
        pending: usize,
        zero_arcs: usize,
    },
    /// A pending set was covered by raising its dual by `alpha`.
    CutCovered {
        set: NodeSet,
        alpha: Cost,
        saturated: Vec<ArcId>,
    },
    SccEnqueued {
        set: NodeSet,
    },
    Phase1Done {
        a0_size: usize,
        reachable: usize,
        is_cover: bool,
    },
    Phase2Started {
        g: usize,
        h_g: Cost,
        uncovered: usize,
    },
    /// A greedy candidate was bought. `literal_total` is what the uncapped
    /// update loop would have assigned; `capped_total` is what was assigned.
    CandidateApplied {
        description: String,
        cost: Cost,
        price: Cost,
        capped_total: Cost,
        literal_total: Cost,
        covering_arcs: Vec<ArcId>,
    },
    Reconciled {
        newly_zero: usize,
    },
    EdmondsCovered {
        set: NodeSet,
        alpha: Cost,
        entry: ArcId,
    },
    /// A sink-chain arc was skipped because its head already had a tree arc.
    SinkChainConflict {
        node: NodeId,
        arc: ArcId,
    },
    TreeRepaired {
        attached: usize,
    },
    Pruned {
        arcs: Vec<ArcId>,
    },
}

impl TraceEvent {
    /// Phase label used when summarising a trace.
    pub fn phase(&self) -> &'static str {
        match self {
            TraceEvent::Initialized { .. } => "init",
            TraceEvent::CutCovered { .. }
            | TraceEvent::SccEnqueued { .. }
            | TraceEvent::Phase1Done { .. } => "phase1",
            TraceEvent::Phase2Started { .. } | TraceEvent::CandidateApplied { .. } => "phase2",
            TraceEvent::Reconciled { .. }
            | TraceEvent::EdmondsCovered { .. }
            | TraceEvent::SinkChainConflict { .. } => "phase3",
            TraceEvent::TreeRepaired { .. } | TraceEvent::Pruned { .. } => "extract",
        }
    }
}

fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceEvent::Initialized { pending, zero_arcs } => {
                write!(f, "init pending={pending} zero_arcs={zero_arcs}")
            }
            TraceEvent::CutCovered { set, alpha, saturated } => write!(
                f,
                "cover set=[{}] alpha={alpha} saturated=[{}]",
                join(set.iter()),
                join(saturated)
            ),
            TraceEvent::SccEnqueued { set } => write!(f, "scc set=[{}]", join(set.iter())),
            TraceEvent::Phase1Done {
                a0_size,
                reachable,
                is_cover,
            } => write!(f, "phase1 a0={a0_size} reachable={reachable} cover={is_cover}"),
            TraceEvent::Phase2Started { g, h_g, uncovered } => {
                write!(f, "phase2 g={g} h_g={h_g} uncovered={uncovered}")
            }
            TraceEvent::CandidateApplied {
                description,
                cost,
                price,
                capped_total,
                literal_total,
                covering_arcs,
            } => write!(
                f,
                "pick {description} cost={cost} price={price} dual={capped_total} literal_dual={literal_total} arcs=[{}]",
                join(covering_arcs)
            ),
            TraceEvent::Reconciled { newly_zero } => write!(f, "reconcile newly_zero={newly_zero}"),
            TraceEvent::EdmondsCovered { set, alpha, entry } => write!(
                f,
                "edmonds set=[{}] alpha={alpha} entry={entry}",
                join(set.iter())
            ),
            TraceEvent::SinkChainConflict { node, arc } => {
                write!(f, "sink_chain_conflict node={node} arc={arc}")
            }
            TraceEvent::TreeRepaired { attached } => write!(f, "repair attached={attached}"),
            TraceEvent::Pruned { arcs } => write!(f, "prune removed=[{}]", join(arcs)),
        }
    }
}
