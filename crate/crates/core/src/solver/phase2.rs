//! Greedy covering of the uncovered critical nodes, priced as a weighted
//! set-cover instance and paid for by dual variables on sets made of a
//! critical node and the sources pointing at it.

use crate::cost::{harmonic, Cost, ExtCost};
use crate::error::SolveError;
use crate::graph::{ArcId, ArcSet, NodeId, NodeSet};

use super::ledger::Family;
use super::state::SolverState;
use super::trace::TraceEvent;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CandidateKind {
    /// Reach `chosen` through `source`: one arc into the source plus one
    /// arc from it to each chosen critical.
    TypeI { source: NodeId, chosen: Vec<NodeId> },
    /// Reach `critical` by a direct arc from a non-source node.
    TypeII { critical: NodeId },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreedyCandidate {
    pub kind: CandidateKind,
    pub cost: Cost,
    /// Number of uncovered criticals the candidate covers.
    pub count: usize,
    pub efficiency: Cost,
    pub covering_arcs: ArcSet,
}

impl GreedyCandidate {
    pub fn covered(&self) -> Vec<NodeId> {
        match &self.kind {
            CandidateKind::TypeI { chosen, .. } => chosen.clone(),
            CandidateKind::TypeII { critical } => vec![*critical],
        }
    }

    fn order_key(&self) -> (&Cost, u8, NodeId) {
        match &self.kind {
            CandidateKind::TypeII { critical } => (&self.efficiency, 0, *critical),
            CandidateKind::TypeI { source, .. } => (&self.efficiency, 1, *source),
        }
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            CandidateKind::TypeI { source, chosen } => format!(
                "type1 source={source} criticals=[{}]",
                chosen.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
            ),
            CandidateKind::TypeII { critical } => format!("type2 critical={critical}"),
        }
    }
}

/// `(reduced cost, other endpoint, arc)`, keeping the cheapest of any
/// parallel arcs between the same pair.
type Link = (Cost, NodeId, ArcId);

impl SolverState<'_> {
    fn classification_ref(&self) -> Result<&super::NodeClassification, SolveError> {
        self.classification
            .as_ref()
            .ok_or_else(|| SolveError::Invariant("nodes not classified".into()))
    }

    /// Cheapest arc from `tail` to `head` under the current reduced costs.
    fn cheapest_reduced(&self, tail: NodeId, head: NodeId) -> Option<(Cost, ArcId)> {
        let g = self.graph;
        g.out_arcs(tail)
            .iter()
            .copied()
            .filter(|&a| g.arc(a).head == head)
            .map(|a| (self.reduced[a].clone(), a))
            .min()
    }

    /// Criticals adjacent from `s`, sorted by reduced arc cost then node.
    fn critical_links(&self, s: NodeId) -> Result<Vec<Link>, SolveError> {
        let c = self.classification_ref()?;
        let g = self.graph;
        let mut heads: Vec<NodeId> = g
            .out_arcs(s)
            .iter()
            .map(|&a| g.arc(a).head)
            .filter(|&v| c.criticals.contains(v))
            .collect();
        heads.sort_unstable();
        heads.dedup();
        let mut links: Vec<Link> = heads
            .into_iter()
            .map(|v| {
                let (cost, a) = self.cheapest_reduced(s, v).expect("arc exists");
                (cost, v, a)
            })
            .collect();
        links.sort();
        Ok(links)
    }

    /// Sources with an arc into `v`, sorted by reduced arc cost then node.
    fn source_links(&self, v: NodeId) -> Result<Vec<Link>, SolveError> {
        let c = self.classification_ref()?;
        let g = self.graph;
        let mut tails: Vec<NodeId> = g
            .in_arcs(v)
            .iter()
            .map(|&a| g.arc(a).tail)
            .filter(|&s| c.sources.contains(s))
            .collect();
        tails.sort_unstable();
        tails.dedup();
        let mut links: Vec<Link> = tails
            .into_iter()
            .map(|s| {
                let (cost, a) = self.cheapest_reduced(s, v).expect("arc exists");
                (cost, s, a)
            })
            .collect();
        links.sort();
        Ok(links)
    }

    /// Cheapest arc entering `v` from any node other than those excluded.
    fn cheapest_entry(&self, v: NodeId, exclude: impl Fn(NodeId) -> bool) -> Option<(Cost, ArcId)> {
        let g = self.graph;
        g.in_arcs(v)
            .iter()
            .copied()
            .filter(|&a| !exclude(g.arc(a).tail))
            .map(|a| (self.reduced[a].clone(), a))
            .min()
    }

    fn is_uncovered(&self, v: NodeId) -> bool {
        self.classification
            .as_ref()
            .is_some_and(|c| c.criticals.contains(v) && !c.covered_criticals.contains(v))
    }

    /// Most efficient subset of the criticals adjacent from source `s`.
    ///
    /// Scans the criticals in increasing arc cost, seeds with the first
    /// uncovered one and adds each later uncovered one that strictly
    /// lowers the cost per covered critical. `None` when no uncovered
    /// critical is adjacent or no arc enters `s`.
    pub fn candidate_for_source(&self, s: NodeId) -> Result<Option<GreedyCandidate>, SolveError> {
        let Some((entry_cost, entry_arc)) = self.cheapest_entry(s, |_| false) else {
            return Ok(None);
        };
        let links = self.critical_links(s)?;
        let mut uncovered = links.iter().filter(|(_, v, _)| self.is_uncovered(*v));
        let Some((first_cost, first, first_arc)) = uncovered.next() else {
            return Ok(None);
        };
        let mut cost = &entry_cost + first_cost;
        let mut chosen = vec![*first];
        let mut arcs = ArcSet::from([entry_arc, *first_arc]);
        let mut efficiency = cost.clone();
        for (c, v, a) in uncovered {
            let trial = (&cost + c).div_int(chosen.len() as u64 + 1);
            if efficiency > trial {
                cost = &cost + c;
                efficiency = trial;
                chosen.push(*v);
                arcs.insert(*a);
            }
        }
        Ok(Some(GreedyCandidate {
            count: chosen.len(),
            kind: CandidateKind::TypeI { source: s, chosen },
            cost,
            efficiency,
            covering_arcs: arcs,
        }))
    }

    fn candidate_direct(&self, v: NodeId) -> Result<Option<GreedyCandidate>, SolveError> {
        let c = self.classification_ref()?;
        Ok(self
            .cheapest_entry(v, |w| c.is_source(w))
            .map(|(cost, a)| GreedyCandidate {
                kind: CandidateKind::TypeII { critical: v },
                efficiency: cost.clone(),
                cost,
                count: 1,
                covering_arcs: ArcSet::from([a]),
            }))
    }

    /// Minimum-efficiency candidate over every source and every direct
    /// single-critical option. Ties go to lower efficiency, then direct
    /// options, then the smaller defining node.
    pub fn best_candidate(&self) -> Result<GreedyCandidate, SolveError> {
        let c = self.classification_ref()?;
        let mut best: Option<GreedyCandidate> = None;
        let mut consider = |cand: GreedyCandidate| {
            if best.as_ref().is_none_or(|b| cand.order_key() < b.order_key()) {
                best = Some(cand);
            }
        };
        for s in c.sources.iter() {
            if let Some(cand) = self.candidate_for_source(s)? {
                consider(cand);
            }
        }
        for v in c.uncovered_criticals() {
            if let Some(cand) = self.candidate_direct(v)? {
                consider(cand);
            }
        }
        best.ok_or_else(|| self.infeasible("an uncovered critical node cannot be reached from the root"))
    }

    /// Buys `cand`: raises the duals of the nested sets `{v, s1..sj}` for
    /// each covered critical `v` (sources sorted by arc cost) so they add
    /// up to `cost / (H_g * count)`, and adds the covering arcs to `A0`
    /// and `T0`. Reduced costs are left untouched.
    pub fn apply_candidate(&mut self, cand: &GreedyCandidate) -> Result<(), SolveError> {
        let divisor = self.h_g.mul_int(cand.count as u64);
        let price = cand
            .cost
            .checked_div(&divisor)
            .ok_or_else(|| SolveError::Invariant("zero harmonic divisor".into()))?;
        let mut capped_total = Cost::zero();
        let mut literal_total = Cost::zero();
        for v in cand.covered() {
            if !self.is_uncovered(v) {
                return Err(SolveError::Invariant(format!("critical {v} is already covered")));
            }
            let links = self.source_links(v)?;
            let mut set = NodeSet::from([v]);
            let mut assigned = Cost::zero();
            for (j, (cost_j, s_j, _)) in links.iter().enumerate() {
                set.insert(*s_j);
                let next = links
                    .get(j + 1)
                    .map_or(ExtCost::Infinite, |(c, _, _)| ExtCost::Finite(c.clone()));
                let upper = match next {
                    ExtCost::Finite(c) if c < price => c,
                    _ => price.clone(),
                };
                let lower = if *cost_j < price {
                    cost_j.clone()
                } else {
                    price.clone()
                };
                let y = upper.saturating_sub(&lower);
                if !y.is_zero() {
                    assigned += &y;
                    self.ledger.push(set.clone(), y, Family::T);
                }
            }
            if assigned != price {
                return Err(SolveError::Invariant(format!(
                    "duals for critical {v} sum to {assigned}, expected {price}"
                )));
            }
            capped_total += &assigned;
            literal_total += &literal_update_total(&links, &price);
        }

        let mut new_arcs = Vec::new();
        for a in cand.covering_arcs.iter() {
            if !self.covering.iter().any(|(x, _)| *x == a) {
                self.covering.push((a, self.reduced[a].clone()));
            }
            self.a0[a] = true;
            let head = self.graph.arc(a).head;
            self.parent[head] = Some(a);
            new_arcs.push(a);
        }
        let covered = cand.covered();
        if let Some(c) = self.classification.as_mut() {
            for v in covered {
                c.covered_criticals.insert(v);
            }
        }
        self.trace.push(TraceEvent::CandidateApplied {
            description: cand.describe(),
            cost: cand.cost.clone(),
            price,
            capped_total,
            literal_total,
            covering_arcs: new_arcs,
        });
        Ok(())
    }

    /// Classifies the nodes, freezes `g` and `H_g`, then buys candidates
    /// until every critical node is covered.
    pub fn phase2(&mut self) -> Result<(), SolveError> {
        let classification = self.classify();
        self.classification = Some(classification);
        let sources: Vec<NodeId> = self.classification_ref()?.sources.iter().collect();
        let mut g_param = 1;
        for s in sources {
            g_param = g_param.max(self.critical_links(s)?.len());
        }
        self.g_param = g_param;
        self.h_g = harmonic(g_param);
        let uncovered = self.classification_ref()?.uncovered_criticals().count();
        self.trace.push(TraceEvent::Phase2Started {
            g: g_param,
            h_g: self.h_g.clone(),
            uncovered,
        });
        while self.classification_ref()?.uncovered_criticals().next().is_some() {
            let cand = self.best_candidate()?;
            self.apply_candidate(&cand)?;
        }
        Ok(())
    }
}

/// Total the uncapped update loop would assign for one critical: it stops
/// at the first source whose arc is not cheaper than the price, leaving
/// the remainder unassigned.
fn literal_update_total(links: &[Link], price: &Cost) -> Cost {
    let p = links.len();
    if p == 0 {
        return Cost::zero();
    }
    let mut total = Cost::zero();
    let mut j = 0;
    while j + 1 < p && links[j + 1].0 < *price {
        total += &links[j + 1].0.saturating_sub(&links[j].0);
        j += 1;
    }
    if links[p - 1].0 < *price {
        total += &price.saturating_sub(&links[p - 1].0);
    }
    total
}
