//! Immutable digraph with exact costs, and the cut, reachability and
//! strong-connectivity primitives used throughout the crate.

use std::collections::{BTreeSet, VecDeque};

use crate::cost::Cost;
use crate::error::GraphError;

pub type NodeId = usize;
pub type ArcId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc {
    pub tail: NodeId,
    pub head: NodeId,
    pub cost: Cost,
}

/// A set of node indices, iterated in ascending order.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeSet(BTreeSet<NodeId>);

/// A set of arc indices, iterated in ascending order.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArcSet(BTreeSet<ArcId>);

macro_rules! index_set {
    ($name:ident, $item:ty) => {
        impl $name {
            pub fn new() -> Self {
                Self(BTreeSet::new())
            }

            pub fn insert(&mut self, x: $item) -> bool {
                self.0.insert(x)
            }

            pub fn remove(&mut self, x: $item) -> bool {
                self.0.remove(&x)
            }

            pub fn contains(&self, x: $item) -> bool {
                self.0.contains(&x)
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn iter(&self) -> impl DoubleEndedIterator<Item = $item> + '_ {
                self.0.iter().copied()
            }

            pub fn first(&self) -> Option<$item> {
                self.0.first().copied()
            }

            pub fn is_subset(&self, other: &Self) -> bool {
                self.0.is_subset(&other.0)
            }

            pub fn union_with(&mut self, other: &Self) {
                self.0.extend(other.0.iter().copied());
            }

            /// Boolean membership mask of length `len`.
            pub fn mask(&self, len: usize) -> Vec<bool> {
                let mut m = vec![false; len];
                for x in self.iter() {
                    m[x] = true;
                }
                m
            }

            pub fn from_mask(mask: &[bool]) -> Self {
                mask.iter()
                    .enumerate()
                    .filter_map(|(i, &b)| b.then_some(i))
                    .collect()
            }

            pub fn to_vec(&self) -> Vec<$item> {
                self.iter().collect()
            }
        }

        impl FromIterator<$item> for $name {
            fn from_iter<I: IntoIterator<Item = $item>>(iter: I) -> Self {
                Self(iter.into_iter().collect())
            }
        }

        impl<const N: usize> From<[$item; N]> for $name {
            fn from(items: [$item; N]) -> Self {
                items.into_iter().collect()
            }
        }

        impl Extend<$item> for $name {
            fn extend<I: IntoIterator<Item = $item>>(&mut self, iter: I) {
                self.0.extend(iter)
            }
        }
    };
}

index_set!(NodeSet, NodeId);
index_set!(ArcSet, ArcId);

/// Directed graph with non-negative exact arc costs. Parallel arcs are
/// allowed; self-loops are not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    node_count: usize,
    arcs: Vec<Arc>,
    out_adj: Vec<Vec<ArcId>>,
    in_adj: Vec<Vec<ArcId>>,
}

impl Digraph {
    pub fn new(node_count: usize, arcs: Vec<Arc>) -> Result<Self, GraphError> {
        if node_count == 0 {
            return Err(GraphError::Empty);
        }
        let mut out_adj = vec![Vec::new(); node_count];
        let mut in_adj = vec![Vec::new(); node_count];
        for (id, arc) in arcs.iter().enumerate() {
            for end in [arc.tail, arc.head] {
                if end >= node_count {
                    return Err(GraphError::NodeOutOfRange {
                        index: end,
                        node_count,
                    });
                }
            }
            if arc.tail == arc.head {
                return Err(GraphError::SelfLoop(arc.tail));
            }
            out_adj[arc.tail].push(id);
            in_adj[arc.head].push(id);
        }
        Ok(Digraph {
            node_count,
            arcs,
            out_adj,
            in_adj,
        })
    }

    /// Convenience constructor from `(tail, head, cost)` triples.
    pub fn from_triples<I>(node_count: usize, triples: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (NodeId, NodeId, Cost)>,
    {
        let arcs = triples
            .into_iter()
            .map(|(tail, head, cost)| Arc { tail, head, cost })
            .collect();
        Digraph::new(node_count, arcs)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, id: ArcId) -> &Arc {
        &self.arcs[id]
    }

    pub fn out_arcs(&self, v: NodeId) -> &[ArcId] {
        &self.out_adj[v]
    }

    pub fn in_arcs(&self, v: NodeId) -> &[ArcId] {
        &self.in_adj[v]
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.node_count
    }

    /// Maximum out-degree over all nodes other than `excluded`.
    pub fn max_out_degree_excluding(&self, excluded: Option<NodeId>) -> usize {
        self.nodes()
            .filter(|&v| Some(v) != excluded)
            .map(|v| self.out_adj[v].len())
            .max()
            .unwrap_or(0)
    }

    pub fn cost_of<I: IntoIterator<Item = ArcId>>(&self, arcs: I) -> Cost {
        let mut total = Cost::zero();
        for a in arcs {
            total += &self.arcs[a].cost;
        }
        total
    }

    /// Lowest-cost arc from `tail` to `head` (ties by index), if any.
    pub fn cheapest_arc_between(&self, tail: NodeId, head: NodeId) -> Option<ArcId> {
        self.out_adj
            .get(tail)?
            .iter()
            .copied()
            .filter(|&a| self.arcs[a].head == head)
            .min_by(|&a, &b| self.arcs[a].cost.cmp(&self.arcs[b].cost).then(a.cmp(&b)))
    }

    pub(crate) fn check_nodes(&self, s: &NodeSet) -> Result<(), GraphError> {
        match s.iter().next_back() {
            Some(max) if max >= self.node_count => Err(GraphError::NodeOutOfRange {
                index: max,
                node_count: self.node_count,
            }),
            _ => Ok(()),
        }
    }

    pub(crate) fn check_arcs(&self, s: &ArcSet) -> Result<(), GraphError> {
        match s.iter().next_back() {
            Some(max) if max >= self.arcs.len() => Err(GraphError::ArcOutOfRange {
                index: max,
                arc_count: self.arcs.len(),
            }),
            _ => Ok(()),
        }
    }
}

/// Root plus arc set forming a rooted branching whose touched vertices
/// cover every arc of the graph it was built for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchingCover {
    pub root: NodeId,
    pub tree_arcs: ArcSet,
    pub total_cost: Cost,
}

impl BranchingCover {
    pub fn new(g: &Digraph, root: NodeId, tree_arcs: ArcSet) -> Self {
        let total_cost = g.cost_of(tree_arcs.iter());
        BranchingCover {
            root,
            tree_arcs,
            total_cost,
        }
    }

    /// `V(tree_arcs) ∪ {root}`.
    pub fn touched_nodes(&self, g: &Digraph) -> NodeSet {
        let mut nodes = NodeSet::from([self.root]);
        for a in self.tree_arcs.iter() {
            nodes.insert(g.arc(a).tail);
            nodes.insert(g.arc(a).head);
        }
        nodes
    }
}

/// Arcs with head in `s` and tail outside.
pub fn in_cut(g: &Digraph, s: &NodeSet) -> Result<ArcSet, GraphError> {
    g.check_nodes(s)?;
    let inside = s.mask(g.node_count());
    Ok(in_cut_mask(g, &inside).collect())
}

/// Arcs with tail in `s` and head outside.
pub fn out_cut(g: &Digraph, s: &NodeSet) -> Result<ArcSet, GraphError> {
    g.check_nodes(s)?;
    let inside = s.mask(g.node_count());
    Ok(s.iter()
        .flat_map(|v| g.out_arcs(v).iter().copied())
        .filter(|&a| !inside[g.arc(a).head])
        .collect())
}

/// Arcs with both endpoints in `s`.
pub fn induced_arcs(g: &Digraph, s: &NodeSet) -> Result<ArcSet, GraphError> {
    g.check_nodes(s)?;
    let inside = s.mask(g.node_count());
    Ok(s.iter()
        .flat_map(|v| g.out_arcs(v).iter().copied())
        .filter(|&a| inside[g.arc(a).head])
        .collect())
}

pub(crate) fn in_cut_mask<'a>(g: &'a Digraph, inside: &'a [bool]) -> impl Iterator<Item = ArcId> + 'a {
    inside
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .flat_map(move |(v, _)| g.in_arcs(v).iter().copied())
        .filter(move |&a| !inside[g.arc(a).tail])
}

/// Strongly connected components of `(V, active)` and their condensation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condensation {
    /// Components indexed by id; ids ascend with the smallest contained node.
    pub components: Vec<NodeSet>,
    pub component_of: Vec<usize>,
    /// `successors[c]` holds every component reached by an active arc leaving `c`.
    pub successors: Vec<BTreeSet<usize>>,
}

impl Condensation {
    pub fn nontrivial(&self) -> impl Iterator<Item = &NodeSet> + '_ {
        self.components.iter().filter(|c| c.len() >= 2)
    }

    pub fn predecessors(&self) -> Vec<BTreeSet<usize>> {
        let mut preds = vec![BTreeSet::new(); self.components.len()];
        for (c, succ) in self.successors.iter().enumerate() {
            for &d in succ {
                preds[d].insert(c);
            }
        }
        preds
    }
}

pub fn strongly_connected_components(g: &Digraph, active: &ArcSet) -> Result<Condensation, GraphError> {
    g.check_arcs(active)?;
    let mask = active.mask(g.arc_count());
    let all = vec![true; g.node_count()];
    Ok(scc_mask(g, &mask, &all))
}

/// Tarjan's algorithm restricted to nodes with `nodes[v]` and arcs with
/// `active[a]` whose endpoints are both kept. Nodes outside `nodes` are
/// reported as singleton components so the partition always covers `V`.
pub(crate) fn scc_mask(g: &Digraph, active: &[bool], nodes: &[bool]) -> Condensation {
    let n = g.node_count();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<NodeId> = Vec::new();
    let mut raw_of = vec![UNSEEN; n];
    let mut raw_count = 0usize;
    let mut counter = 0usize;
    // (node, position in its out-arc list)
    let mut call: Vec<(NodeId, usize)> = Vec::new();

    for start in 0..n {
        if index[start] != UNSEEN {
            continue;
        }
        call.push((start, 0));
        index[start] = counter;
        low[start] = counter;
        counter += 1;
        stack.push(start);
        on_stack[start] = true;

        while let Some(&(v, mut pos)) = call.last() {
            let outs = g.out_arcs(v);
            let mut next = None;
            while pos < outs.len() {
                let a = outs[pos];
                pos += 1;
                if !active[a] || !nodes[v] {
                    continue;
                }
                let w = g.arc(a).head;
                if !nodes[w] {
                    continue;
                }
                if index[w] == UNSEEN {
                    next = Some(w);
                    break;
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            }
            call.last_mut().expect("frame").1 = pos;
            if let Some(w) = next {
                index[w] = counter;
                low[w] = counter;
                counter += 1;
                stack.push(w);
                on_stack[w] = true;
                call.push((w, 0));
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    raw_of[w] = raw_count;
                    if w == v {
                        break;
                    }
                }
                raw_count += 1;
            }
        }
    }

    // Renumber so ids ascend with the smallest member node.
    let mut remap = vec![UNSEEN; raw_count];
    let mut next = 0;
    for &raw in &raw_of[..n] {
        if remap[raw] == UNSEEN {
            remap[raw] = next;
            next += 1;
        }
    }
    let component_of: Vec<usize> = raw_of.iter().map(|&r| remap[r]).collect();
    let mut components = vec![NodeSet::new(); next];
    for v in 0..n {
        components[component_of[v]].insert(v);
    }
    let mut successors = vec![BTreeSet::new(); next];
    for (a, arc) in g.arcs().iter().enumerate() {
        if !active[a] || !nodes[arc.tail] || !nodes[arc.head] {
            continue;
        }
        let (cu, cv) = (component_of[arc.tail], component_of[arc.head]);
        if cu != cv {
            successors[cu].insert(cv);
        }
    }
    Condensation {
        components,
        component_of,
        successors,
    }
}

/// Nodes reachable from `r` using only `active` arcs, `r` included.
pub fn reachable_from(g: &Digraph, active: &ArcSet, r: NodeId) -> Result<NodeSet, GraphError> {
    g.check_arcs(active)?;
    if r >= g.node_count() {
        return Err(GraphError::NodeOutOfRange {
            index: r,
            node_count: g.node_count(),
        });
    }
    let mask = active.mask(g.arc_count());
    Ok(NodeSet::from_mask(&reachable_mask(g, &mask, r)))
}

pub(crate) fn reachable_mask(g: &Digraph, active: &[bool], r: NodeId) -> Vec<bool> {
    let mut seen = vec![false; g.node_count()];
    seen[r] = true;
    let mut queue = VecDeque::from([r]);
    while let Some(v) = queue.pop_front() {
        for &a in g.out_arcs(v) {
            let w = g.arc(a).head;
            if active[a] && !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// True iff every arc has its tail or head in `w`.
pub fn is_vertex_cover(g: &Digraph, w: &NodeSet) -> bool {
    if g.check_nodes(w).is_err() {
        return false;
    }
    is_vertex_cover_mask(g, &w.mask(g.node_count()))
}

pub(crate) fn is_vertex_cover_mask(g: &Digraph, w: &[bool]) -> bool {
    g.arcs().iter().all(|arc| w[arc.tail] || w[arc.head])
}
