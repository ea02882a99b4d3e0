//! Small hand-traced instances shared by unit tests, integration tests and
//! the CLI examples. Node 0 is always the intended root.

use crate::cost::Cost;
use crate::graph::Digraph;

fn build(n: usize, arcs: &[(usize, usize, u64)]) -> Digraph {
    Digraph::from_triples(n, arcs.iter().map(|&(t, h, c)| (t, h, Cost::from_integer(c))))
        .expect("fixture is well formed")
}

/// `r=0, a=1, b=2`; arcs `(r,a,2)`, `(a,b,1)`.
pub fn w1() -> Digraph {
    build(3, &[(0, 1, 2), (1, 2, 1)])
}

/// Set-cover gadget for `S1={e1}` (weight 1) and `S2={e1}` (weight 2):
/// `r=0, S1=1, S2=2, e1=3, e1'=4`.
pub fn w2() -> Digraph {
    build(5, &[(0, 1, 1), (0, 2, 2), (1, 3, 0), (2, 3, 0), (3, 4, 0)])
}

/// `r=0, s=1, a=2, b=3`; arcs `(r,s,5)`, `(s,a,0)`, `(a,b,0)`, `(b,a,0)`.
pub fn w3() -> Digraph {
    build(4, &[(0, 1, 5), (1, 2, 0), (2, 3, 0), (3, 2, 0)])
}

/// Root-centred star `r=0 -> a=1 (5)`, `r -> b=2 (7)`.
pub fn star() -> Digraph {
    build(3, &[(0, 1, 5), (0, 2, 7)])
}

/// Zero-cost cycle `a=1 -> b=2 -> c=3 -> a` entered by `(r,a,3)`.
pub fn three_cycle() -> Digraph {
    build(4, &[(1, 2, 0), (2, 3, 0), (3, 1, 0), (0, 1, 3)])
}
