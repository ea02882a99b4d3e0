use std::collections::BTreeMap;

use crate::graph::{ArcId, NodeId, NodeSet};

use super::state::SolverState;

/// Partition of the nodes after the cut-covering phase.
///
/// Unreachable nodes are split by their in-degree in `(V, A0)`: sources
/// (0), sinks (1) and criticals (2 or more).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeClassification {
    pub reachable: NodeSet,
    pub sources: NodeSet,
    pub sinks: NodeSet,
    pub criticals: NodeSet,
    /// Criticals with an `A0` arc from a non-source node.
    pub covered_criticals: NodeSet,
    /// `reachable ∪ sinks ∪ criticals`.
    pub u_set: NodeSet,
    /// The unique `A0` arc entering each sink.
    pub sink_arcs: BTreeMap<NodeId, ArcId>,
}

impl NodeClassification {
    pub fn uncovered_criticals(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.criticals
            .iter()
            .filter(|&v| !self.covered_criticals.contains(v))
    }

    pub fn is_source(&self, v: NodeId) -> bool {
        self.sources.contains(v)
    }
}

impl SolverState<'_> {
    pub fn classify(&self) -> NodeClassification {
        let g = self.graph;
        let reach = self.reachable();
        let mut c = NodeClassification {
            reachable: NodeSet::from_mask(&reach),
            sources: NodeSet::new(),
            sinks: NodeSet::new(),
            criticals: NodeSet::new(),
            covered_criticals: NodeSet::new(),
            u_set: NodeSet::new(),
            sink_arcs: BTreeMap::new(),
        };
        for v in g.nodes().filter(|&v| !reach[v]) {
            let ins: Vec<ArcId> = g.in_arcs(v).iter().copied().filter(|&a| self.a0[a]).collect();
            match ins.len() {
                0 => {
                    c.sources.insert(v);
                }
                1 => {
                    c.sinks.insert(v);
                    c.sink_arcs.insert(v, ins[0]);
                }
                _ => {
                    c.criticals.insert(v);
                }
            }
        }
        for v in c.criticals.iter() {
            let covered = g
                .in_arcs(v)
                .iter()
                .any(|&a| self.a0[a] && !c.sources.contains(g.arc(a).tail));
            if covered {
                c.covered_criticals.insert(v);
            }
        }
        c.u_set = c.reachable.clone();
        c.u_set.union_with(&c.sinks);
        c.u_set.union_with(&c.criticals);
        c
    }
}
