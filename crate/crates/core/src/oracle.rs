//! Exhaustive exact solvers used as ground truth.
//!
//! The rooted oracle scans every arc subset. A nonempty branching has a
//! unique root, so one scan yields the optimum for every root at once.
//! Ties are broken towards the lexicographically smallest sorted arc list.
//!
//! A second oracle enumerates the touched vertex set instead: for each
//! vertex cover `W` holding the root, a cheapest arborescence of `G[W]`
//! spanning `W`. It handles graphs with many arcs but few nodes.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arborescence::min_arborescence;
use crate::cost::Cost;
use crate::error::OracleError;
use crate::graph::{ArcSet, BranchingCover, Digraph, NodeId};

pub const DEFAULT_MAX_ARCS: usize = 18;

/// Beyond this the subset tables no longer fit in memory comfortably.
pub const HARD_MAX_ARCS: usize = 26;

/// Minimum branching cover rooted at `root`, or `None` if there is none.
pub fn exact_min_cover(
    g: &Digraph,
    root: NodeId,
    max_arcs: usize,
) -> Result<Option<BranchingCover>, OracleError> {
    if root >= g.node_count() {
        return Err(OracleError::InvalidRoot(root));
    }
    Ok(exact_all_roots(g, max_arcs)?.swap_remove(root))
}

/// Minimum branching cover for every root, indexed by root.
pub fn exact_all_roots(g: &Digraph, max_arcs: usize) -> Result<Vec<Option<BranchingCover>>, OracleError> {
    let m = g.arc_count();
    let limit = max_arcs.min(HARD_MAX_ARCS);
    if m > limit {
        return Err(OracleError::TooLarge { arcs: m, limit });
    }
    let n = g.node_count();
    let mut best: Vec<Option<(u64, BigInt)>> = vec![None; n];
    if m == 0 {
        return Ok((0..n)
            .map(|r| Some(BranchingCover::new(g, r, ArcSet::new())))
            .collect());
    }

    // Compress the touched nodes to bit positions.
    let mut index = vec![usize::MAX; n];
    let mut nodes = Vec::new();
    for arc in g.arcs() {
        for v in [arc.tail, arc.head] {
            if index[v] == usize::MAX {
                index[v] = nodes.len();
                nodes.push(v);
            }
        }
    }
    let tail: Vec<u64> = g.arcs().iter().map(|a| 1u64 << index[a.tail]).collect();
    let head: Vec<u64> = g.arcs().iter().map(|a| 1u64 << index[a.head]).collect();
    let ends: Vec<u64> = (0..m).map(|a| tail[a] | head[a]).collect();
    let costs = Scaled::new(g);

    // The empty set works for every root touching all arcs.
    for (r, slot) in best.iter_mut().enumerate() {
        if index[r] != usize::MAX && ends.iter().all(|&e| e & (1u64 << index[r]) != 0) {
            *slot = Some((0, BigInt::zero()));
        }
    }

    let subsets = 1usize << m;
    let mut heads = vec![0u64; subsets];
    let mut touched = vec![0u64; subsets];
    let mut clash = vec![false; subsets];
    for mask in 1..subsets {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        clash[mask] = clash[rest] || heads[rest] & head[low] != 0;
        heads[mask] = heads[rest] | head[low];
        touched[mask] = touched[rest] | ends[low];
        if clash[mask] {
            continue;
        }
        let roots = touched[mask] & !heads[mask];
        if roots.count_ones() != 1 {
            continue;
        }
        let t = touched[mask];
        if !ends.iter().all(|&e| e & t != 0) {
            continue;
        }
        // Connected from the root: grow the reached set to a fixpoint.
        let mut reached = roots;
        loop {
            let mut next = reached;
            let mut bits = mask as u64;
            while bits != 0 {
                let a = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                if tail[a] & reached != 0 {
                    next |= head[a];
                }
            }
            if next == reached {
                break;
            }
            reached = next;
        }
        if reached != t {
            continue;
        }
        let r = nodes[roots.trailing_zeros() as usize];
        let cost = costs.sum(mask as u64);
        let better = match &best[r] {
            None => true,
            Some((bm, bc)) => match cost.cmp(bc) {
                Ordering::Less => true,
                Ordering::Equal => lex_less(mask as u64, *bm),
                Ordering::Greater => false,
            },
        };
        if better {
            best[r] = Some((mask as u64, cost));
        }
    }

    Ok(best
        .into_iter()
        .enumerate()
        .map(|(r, b)| b.map(|(mask, _)| BranchingCover::new(g, r, mask_arcs(mask))))
        .collect())
}

/// Node limit of [`exact_by_vertex_sets`].
pub const MAX_VERTEX_SET_NODES: usize = 24;

/// Minimum branching cover rooted at `root` by enumerating its touched
/// vertex set. Ties go to the lexicographically smallest arc list.
pub fn exact_by_vertex_sets(g: &Digraph, root: NodeId) -> Result<Option<BranchingCover>, OracleError> {
    let n = g.node_count();
    if root >= n {
        return Err(OracleError::InvalidRoot(root));
    }
    if n > MAX_VERTEX_SET_NODES {
        return Err(OracleError::TooManyNodes {
            nodes: n,
            limit: MAX_VERTEX_SET_NODES,
        });
    }
    let others: Vec<NodeId> = g.nodes().filter(|&v| v != root).collect();
    let ends: Vec<u64> = g.arcs().iter().map(|a| 1 << a.tail | 1 << a.head).collect();
    let mut best: Option<(Cost, Vec<usize>)> = None;
    for sub in 0u64..1 << others.len() {
        let w = others
            .iter()
            .enumerate()
            .filter(|(i, _)| sub >> i & 1 == 1)
            .fold(1u64 << root, |w, (_, &v)| w | 1 << v);
        if ends.iter().any(|e| e & w == 0) {
            continue;
        }
        let mut local = vec![usize::MAX; n];
        let mut k = 0;
        for (v, slot) in local.iter_mut().enumerate() {
            if w >> v & 1 == 1 {
                *slot = k;
                k += 1;
            }
        }
        let (ids, inner): (Vec<usize>, Vec<_>) = g
            .arcs()
            .iter()
            .enumerate()
            .filter(|(_, a)| ends_in(w, a.tail) && ends_in(w, a.head))
            .map(|(i, a)| (i, (local[a.tail], local[a.head], a.cost.clone())))
            .unzip();
        let Some(chosen) = min_arborescence(k, local[root], &inner) else {
            continue;
        };
        let mut arcs: Vec<usize> = chosen.into_iter().map(|j| ids[j]).collect();
        arcs.sort_unstable();
        let cost = g.cost_of(arcs.iter().copied());
        if best.as_ref().is_none_or(|(bc, ba)| (&cost, &arcs) < (bc, ba)) {
            best = Some((cost, arcs));
        }
    }
    Ok(best.map(|(_, arcs)| BranchingCover::new(g, root, arcs.into_iter().collect())))
}

fn ends_in(w: u64, v: NodeId) -> bool {
    w >> v & 1 == 1
}

/// Cheapest cover over all roots, ties to the smaller root.
pub fn exact_dtcp(g: &Digraph, max_arcs: usize) -> Result<Option<BranchingCover>, OracleError> {
    let all = exact_all_roots(g, max_arcs)?;
    Ok(all
        .into_iter()
        .flatten()
        .min_by(|a, b| (&a.total_cost, a.root).cmp(&(&b.total_cost, b.root))))
}

fn mask_arcs(mut mask: u64) -> ArcSet {
    let mut out = ArcSet::new();
    while mask != 0 {
        out.insert(mask.trailing_zeros() as usize);
        mask &= mask - 1;
    }
    out
}

/// Whether the sorted index list of `a` precedes that of `b`.
fn lex_less(a: u64, b: u64) -> bool {
    let diff = a ^ b;
    if diff == 0 {
        return false;
    }
    let i = diff.trailing_zeros();
    let above = !((2u64 << i).wrapping_sub(1));
    if a & (1 << i) != 0 {
        // `b` lacks `i`, so `a` comes first unless `b` ends before `i`.
        b & above != 0
    } else {
        a & above == 0
    }
}

/// Arc costs scaled to integers by their common denominator, so subset
/// sums compare exactly without rational arithmetic.
struct Scaled(Vec<BigInt>);

impl Scaled {
    fn new(g: &Digraph) -> Self {
        let lcm = g.arcs().iter().fold(BigInt::one(), |l, a| l.lcm(a.cost.denom()));
        Scaled(
            g.arcs()
                .iter()
                .map(|a| a.cost.numer() * (&lcm / a.cost.denom()))
                .collect(),
        )
    }

    fn sum(&self, mut mask: u64) -> BigInt {
        let mut total = BigInt::zero();
        while mask != 0 {
            total += &self.0[mask.trailing_zeros() as usize];
            mask &= mask - 1;
        }
        total
    }
}
