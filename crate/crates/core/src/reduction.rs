//! Weighted set cover as a rooted branching cover problem.
//!
//! Each subset becomes a node entered from the root at the subset's
//! weight, each element a node entered for free from the subsets holding
//! it, and each element gets a private zero-cost arc to a fresh node. A
//! branching cover must touch every element node, so the subsets it
//! reaches form a set cover of the same weight, and conversely.

use crate::cost::Cost;
use crate::error::{OracleError, ReductionError};
use crate::graph::{Arc, ArcId, BranchingCover, Digraph, NodeId, NodeSet};
use crate::verify::verify_tree_cover;

/// Subsets larger than this are refused by [`exact_scp`].
pub const MAX_EXACT_SUBSETS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScpInstance {
    element_count: usize,
    subsets: Vec<(Cost, NodeSet)>,
}

impl ScpInstance {
    pub fn new(element_count: usize, subsets: Vec<(Cost, NodeSet)>) -> Result<Self, ReductionError> {
        if element_count == 0 {
            return Err(ReductionError::NoElements);
        }
        for (i, (_, members)) in subsets.iter().enumerate() {
            if let Some(e) = members.iter().find(|&e| e >= element_count) {
                return Err(ReductionError::MemberOutOfRange {
                    subset: i,
                    element: e,
                    element_count,
                });
            }
        }
        Ok(ScpInstance {
            element_count,
            subsets,
        })
    }

    pub fn element_count(&self) -> usize {
        self.element_count
    }

    pub fn subsets(&self) -> &[(Cost, NodeSet)] {
        &self.subsets
    }

    /// Whether the union of all subsets is the whole ground set.
    pub fn is_coverable(&self) -> bool {
        let mut all = NodeSet::new();
        for (_, s) in &self.subsets {
            all.union_with(s);
        }
        all.len() == self.element_count
    }

    pub fn is_cover(&self, chosen: &[usize]) -> bool {
        let mut hit = vec![false; self.element_count];
        for &i in chosen {
            for e in self.subsets[i].1.iter() {
                hit[e] = true;
            }
        }
        hit.iter().all(|&h| h)
    }

    pub fn weight(&self, chosen: &[usize]) -> Cost {
        chosen.iter().map(|&i| &self.subsets[i].0).sum()
    }

    /// Maximum out-degree outside the root of the reduced graph as usually
    /// stated: the number of elements. The true maximum is the largest
    /// subset size (at least one), which never exceeds it.
    pub fn stated_out_degree(&self) -> usize {
        self.element_count
    }
}

/// Where each part of a set cover instance lives in the reduced graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionMap {
    pub root: NodeId,
    pub subset_node: Vec<NodeId>,
    pub element_node: Vec<NodeId>,
    pub element_prime_node: Vec<NodeId>,
    /// Arc from the root into each subset node.
    pub subset_arc: Vec<ArcId>,
}

/// Builds the reduced graph. Nodes: root 0, subsets `1..=q`, elements
/// `q+1..=q+p`, their copies after that. Arcs: root to each subset, then
/// subset to member in subset order, then element to copy.
pub fn reduce(scp: &ScpInstance) -> (Digraph, NodeId, ReductionMap) {
    let q = scp.subsets.len();
    let p = scp.element_count;
    let subset_node: Vec<NodeId> = (1..=q).collect();
    let element_node: Vec<NodeId> = (q + 1..=q + p).collect();
    let element_prime_node: Vec<NodeId> = (q + p + 1..=q + 2 * p).collect();
    let mut arcs = Vec::new();
    for (i, (w, _)) in scp.subsets.iter().enumerate() {
        arcs.push(Arc {
            tail: 0,
            head: subset_node[i],
            cost: w.clone(),
        });
    }
    for (i, (_, members)) in scp.subsets.iter().enumerate() {
        for e in members.iter() {
            arcs.push(Arc {
                tail: subset_node[i],
                head: element_node[e],
                cost: Cost::zero(),
            });
        }
    }
    for k in 0..p {
        arcs.push(Arc {
            tail: element_node[k],
            head: element_prime_node[k],
            cost: Cost::zero(),
        });
    }
    let g = Digraph::new(1 + q + 2 * p, arcs).expect("reduced graph is well formed");
    let map = ReductionMap {
        root: 0,
        subset_node,
        element_node,
        element_prime_node,
        subset_arc: (0..q).collect(),
    };
    (g, 0, map)
}

/// Subsets whose nodes the tree touches, after checking that the tree is a
/// branching cover of the reduced graph rooted at its root.
pub fn lift_cover(
    g: &Digraph,
    map: &ReductionMap,
    tree: &BranchingCover,
) -> Result<Vec<usize>, ReductionError> {
    if tree.root != map.root {
        return Err(ReductionError::InvalidTree(format!(
            "tree is rooted at {} instead of {}",
            tree.root, map.root
        )));
    }
    let report = verify_tree_cover(g, map.root, &tree.tree_arcs);
    if !report.ok() {
        return Err(ReductionError::InvalidTree(report.violations.join("; ")));
    }
    let touched = tree.touched_nodes(g);
    Ok(map
        .subset_node
        .iter()
        .enumerate()
        .filter(|(_, &v)| touched.contains(v))
        .map(|(i, _)| i)
        .collect())
}

/// Minimum-weight set cover by enumeration, with the lexicographically
/// smallest index list among optima, or `None` when no cover exists.
pub fn exact_scp(scp: &ScpInstance) -> Result<Option<(Cost, Vec<usize>)>, OracleError> {
    let q = scp.subsets.len();
    if q > MAX_EXACT_SUBSETS {
        return Err(OracleError::TooManySubsets {
            subsets: q,
            limit: MAX_EXACT_SUBSETS,
        });
    }
    let full: u64 = (1u64 << scp.element_count) - 1;
    let member_mask: Vec<u64> = scp
        .subsets
        .iter()
        .map(|(_, s)| s.iter().fold(0u64, |m, e| m | 1 << e))
        .collect();
    let mut best: Option<(Cost, Vec<usize>)> = None;
    for mask in 0u64..(1 << q) {
        let chosen: Vec<usize> = (0..q).filter(|&i| mask >> i & 1 == 1).collect();
        let hit = chosen.iter().fold(0u64, |m, &i| m | member_mask[i]);
        if hit != full {
            continue;
        }
        let w = scp.weight(&chosen);
        let better = best.as_ref().is_none_or(|(bw, bc)| (&w, &chosen) < (bw, bc));
        if better {
            best = Some((w, chosen));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::w2;
    use crate::graph::ArcSet;
    use crate::oracle::exact_min_cover;
    use crate::solver::solve_root;

    fn c(x: u64) -> Cost {
        Cost::from_integer(x)
    }

    fn one_element() -> ScpInstance {
        ScpInstance::new(1, vec![(c(1), NodeSet::from([0])), (c(2), NodeSet::from([0]))]).unwrap()
    }

    fn two_elements() -> ScpInstance {
        ScpInstance::new(
            2,
            vec![
                (c(3), NodeSet::from([0, 1])),
                (c(1), NodeSet::from([0])),
                (c(1), NodeSet::from([1])),
            ],
        )
        .unwrap()
    }

    #[test]
    fn reduces_to_w2() {
        let (g, r, map) = reduce(&one_element());
        assert_eq!(r, 0);
        assert_eq!(g, w2());
        assert_eq!(map.element_node, vec![3]);
        assert_eq!(map.element_prime_node, vec![4]);
    }

    #[test]
    fn size_formulas() {
        let (g, _, _) = reduce(&two_elements());
        // 1 + q + 2p nodes, q + sum |S_i| + p arcs
        assert_eq!((g.node_count(), g.arc_count()), (8, 9));
        let p = 4;
        let all = ScpInstance::new(p, vec![(c(2), (0..p).collect())]).unwrap();
        let (g, _, _) = reduce(&all);
        assert_eq!((g.node_count(), g.arc_count()), (1 + 1 + 2 * p, 1 + 2 * p));
    }

    #[test]
    fn exact_scp_examples() {
        assert_eq!(exact_scp(&one_element()).unwrap(), Some((c(1), vec![0])));
        assert_eq!(exact_scp(&two_elements()).unwrap(), Some((c(2), vec![1, 2])));
        let free = ScpInstance::new(3, vec![(c(0), (0..3).collect())]).unwrap();
        assert_eq!(exact_scp(&free).unwrap(), Some((c(0), vec![0])));
        let gap = ScpInstance::new(2, vec![(c(1), NodeSet::from([0]))]).unwrap();
        assert!(!gap.is_coverable());
        assert_eq!(exact_scp(&gap).unwrap(), None);
    }

    #[test]
    fn rejects_bad_instances() {
        assert_eq!(ScpInstance::new(0, vec![]), Err(ReductionError::NoElements));
        assert!(matches!(
            ScpInstance::new(2, vec![(c(1), NodeSet::from([2]))]),
            Err(ReductionError::MemberOutOfRange {
                subset: 0,
                element: 2,
                ..
            })
        ));
    }

    #[test]
    fn lift_solver_tree_on_w2() {
        let scp = one_element();
        let (g, r, map) = reduce(&scp);
        let res = solve_root(&g, r).unwrap();
        let chosen = lift_cover(&g, &map, &res.tree).unwrap();
        assert_eq!(chosen, vec![0]);
        assert_eq!(scp.weight(&chosen), c(1));
    }

    #[test]
    fn lift_both_subsets() {
        let scp = one_element();
        let (g, _, map) = reduce(&scp);
        let tree = BranchingCover::new(&g, 0, ArcSet::from([0, 1, 2]));
        let chosen = lift_cover(&g, &map, &tree).unwrap();
        assert_eq!(chosen, vec![0, 1]);
        assert_eq!(scp.weight(&chosen), c(3));
    }

    #[test]
    fn lift_rejects_invalid_trees() {
        let (g, _, map) = reduce(&one_element());
        let tree = BranchingCover::new(&g, 0, ArcSet::from([0]));
        assert!(matches!(
            lift_cover(&g, &map, &tree),
            Err(ReductionError::InvalidTree(_))
        ));
    }

    #[test]
    fn oracles_agree_on_small_instances() {
        for scp in [one_element(), two_elements()] {
            let (g, r, _) = reduce(&scp);
            let tree = exact_min_cover(&g, r, 18).unwrap().unwrap();
            assert_eq!(tree.total_cost, exact_scp(&scp).unwrap().unwrap().0);
        }
    }

    #[test]
    fn out_degree_never_exceeds_element_count() {
        let scp = two_elements();
        let (g, r, _) = reduce(&scp);
        assert_eq!(g.max_out_degree_excluding(Some(r)), 2);
        assert_eq!(scp.stated_out_degree(), 2);
        let (g, r, _) = reduce(&one_element());
        assert_eq!(g.max_out_degree_excluding(Some(r)), 1);
    }
}
