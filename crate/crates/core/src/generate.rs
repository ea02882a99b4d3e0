//! Seeded random instances.
//!
//! The generator draws only through `u64` ranges of a ChaCha stream, so a
//! seed gives the same instance on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cost::Cost;
use crate::graph::{Arc, Digraph, NodeSet};
use crate::reduction::ScpInstance;

#[derive(Clone, Debug, PartialEq)]
pub struct GraphParams {
    pub nodes: usize,
    pub arcs: usize,
    pub max_cost: u64,
    /// Fraction of arcs whose cost is forced to zero, rounded to a count.
    pub zero_frac: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GenerateError {
    #[error("need at least 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("need at least 1 arc")]
    NoArcs,
    #[error("zero-cost fraction must lie in [0, 1]")]
    BadFraction,
    #[error("need between 1 and 63 elements, got {0}")]
    BadElementCount(usize),
}

impl GraphParams {
    pub fn validate(&self) -> Result<(), GenerateError> {
        if self.nodes < 2 {
            return Err(GenerateError::TooFewNodes(self.nodes));
        }
        if self.arcs == 0 {
            return Err(GenerateError::NoArcs);
        }
        if !(0.0..=1.0).contains(&self.zero_frac) {
            return Err(GenerateError::BadFraction);
        }
        Ok(())
    }
}

fn below(rng: &mut ChaCha8Rng, n: usize) -> usize {
    rng.gen_range(0..n as u64) as usize
}

/// Arcs with uniform tails and uniform heads among the other nodes
/// (parallel arcs allowed), uniform integer costs in `[0, max_cost]`, and
/// a uniformly chosen `round(zero_frac * arcs)` of them set to zero.
pub fn random_graph(params: &GraphParams, seed: u64) -> Result<Digraph, GenerateError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = params.nodes;
    let m = params.arcs;
    let mut arcs = Vec::with_capacity(m);
    for _ in 0..m {
        let tail = below(&mut rng, n);
        let head = (tail + 1 + below(&mut rng, n - 1)) % n;
        let cost = rng.gen_range(0..=params.max_cost);
        arcs.push(Arc {
            tail,
            head,
            cost: Cost::from_integer(cost),
        });
    }
    let zeros = ((params.zero_frac * m as f64).round() as usize).min(m);
    let mut order: Vec<usize> = (0..m).collect();
    for i in 0..zeros {
        let j = i + below(&mut rng, m - i);
        order.swap(i, j);
        arcs[order[i]].cost = Cost::zero();
    }
    Ok(Digraph::new(n, arcs).expect("generated arcs are valid"))
}

/// Set cover instance with `subsets` subsets, each element joining each
/// subset with probability one half, and integer weights in `[0, max_weight]`.
pub fn random_scp(
    elements: usize,
    subsets: usize,
    max_weight: u64,
    seed: u64,
) -> Result<ScpInstance, GenerateError> {
    if elements == 0 || elements > 63 {
        return Err(GenerateError::BadElementCount(elements));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sets = (0..subsets)
        .map(|_| {
            let w = Cost::from_integer(rng.gen_range(0..=max_weight));
            let members: NodeSet = (0..elements).filter(|_| rng.gen_range(0..2u64) == 1).collect();
            (w, members)
        })
        .collect();
    Ok(ScpInstance::new(elements, sets).expect("members are in range"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(nodes: usize, arcs: usize, zero_frac: f64) -> GraphParams {
        GraphParams {
            nodes,
            arcs,
            max_cost: 9,
            zero_frac,
        }
    }

    #[test]
    fn same_seed_same_graph() {
        let p = params(4, 5, 0.3);
        assert_eq!(random_graph(&p, 7).unwrap(), random_graph(&p, 7).unwrap());
        assert_ne!(random_graph(&p, 7).unwrap(), random_graph(&p, 8).unwrap());
    }

    #[test]
    fn zero_fraction_is_exact() {
        for (frac, zeros_at_least) in [(0.0, 0), (0.3, 6), (1.0, 20)] {
            let g = random_graph(&params(6, 20, frac), 3).unwrap();
            let zeros = g.arcs().iter().filter(|a| a.cost.is_zero()).count();
            assert!(zeros >= zeros_at_least);
            if frac == 1.0 {
                assert_eq!(zeros, 20);
            }
        }
    }

    #[test]
    fn single_arc_graph() {
        let g = random_graph(&params(2, 1, 0.0), 1).unwrap();
        assert_eq!(g.arc_count(), 1);
        assert_ne!(g.arc(0).tail, g.arc(0).head);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(
            random_graph(&params(1, 3, 0.0), 0),
            Err(GenerateError::TooFewNodes(1))
        );
        assert_eq!(random_graph(&params(3, 0, 0.0), 0), Err(GenerateError::NoArcs));
        assert_eq!(
            random_graph(&params(3, 2, 1.5), 0),
            Err(GenerateError::BadFraction)
        );
        assert!(random_scp(0, 2, 4, 0).is_err());
    }

    #[test]
    fn scp_is_deterministic_and_in_range() {
        let a = random_scp(5, 6, 4, 11).unwrap();
        assert_eq!(a, random_scp(5, 6, 4, 11).unwrap());
        assert_eq!(a.subsets().len(), 6);
        assert!(a.subsets().iter().all(|(w, _)| *w <= Cost::from_integer(4)));
    }
}
