//! Independent checks of solver output.
//!
//! Nothing here trusts solver-computed values: costs are summed from the
//! graph, branchings are re-derived from the arc list and dual loads are
//! recomputed from the ledger sets.

use crate::cost::{ratio_bound, Cost};
use crate::format::Certificate;
use crate::graph::{ArcSet, Digraph, NodeId};
use crate::solver::{DualLedger, Family, SolveResult};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub is_branching: bool,
    pub is_cover: bool,
    pub cost_recomputed: Cost,
    pub dual_feasible: bool,
    pub dual_objective: Cost,
    /// `cost / dual_objective`, absent when no dual was checked or it is zero.
    pub ratio_vs_dual: Option<Cost>,
    /// `2 * (B-family total) + h_g * (T-family total)`, when a result was checked.
    pub family_bound: Option<Cost>,
    pub violations: Vec<String>,
}

impl VerificationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that `arcs` is a branching rooted at `root` whose touched
/// vertices, together with the root, meet every arc.
pub fn verify_tree_cover(g: &Digraph, root: NodeId, arcs: &ArcSet) -> VerificationReport {
    let n = g.node_count();
    let mut violations = Vec::new();
    if root >= n {
        violations.push(format!("root {root} out of range"));
    }
    let valid: Vec<usize> = arcs.iter().filter(|&a| a < g.arc_count()).collect();
    for a in arcs.iter().filter(|&a| a >= g.arc_count()) {
        violations.push(format!("arc index {a} out of range"));
    }
    let mut in_deg = vec![0usize; n];
    let mut touched = vec![false; n];
    let mut cost = Cost::zero();
    for &a in &valid {
        let arc = g.arc(a);
        in_deg[arc.head] += 1;
        touched[arc.head] = true;
        touched[arc.tail] = true;
        cost += &arc.cost;
    }
    let mut is_branching = violations.is_empty();
    for (v, &d) in in_deg.iter().enumerate() {
        if d > 1 {
            is_branching = false;
            violations.push(format!("node {v} has {d} tree arcs entering it"));
        }
    }
    if root < n {
        if in_deg[root] > 0 {
            is_branching = false;
            violations.push(format!("a tree arc enters the root {root}"));
        }
        // Every touched node must be reached from the root; with in-degree
        // at most one this also rules out cycles.
        let mut reached = vec![false; n];
        reached[root] = true;
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            for &a in &valid {
                let arc = g.arc(a);
                if arc.tail == x && !reached[arc.head] {
                    reached[arc.head] = true;
                    stack.push(arc.head);
                }
            }
        }
        for &a in &valid {
            let arc = g.arc(a);
            if !reached[arc.tail] {
                is_branching = false;
                violations.push(format!(
                    "tree arc {a} ({}, {}) is not reachable from the root",
                    arc.tail, arc.head
                ));
            }
        }
        touched[root] = true;
    }
    let mut is_cover = root < n;
    for (a, arc) in g.arcs().iter().enumerate() {
        if !touched[arc.tail] && !touched[arc.head] {
            is_cover = false;
            violations.push(format!("arc {a} ({}, {}) is not covered", arc.tail, arc.head));
        }
    }
    VerificationReport {
        is_branching,
        is_cover,
        cost_recomputed: cost,
        dual_feasible: true,
        dual_objective: Cost::zero(),
        ratio_vs_dual: None,
        family_bound: None,
        violations,
    }
}

/// Findings for a ledger: each set must avoid the root and induce an arc,
/// each value must be positive and no arc may carry more load than its
/// cost. Returns the findings and the objective.
pub fn dual_violations(g: &Digraph, root: NodeId, ledger: &DualLedger) -> (Vec<String>, Cost) {
    let n = g.node_count();
    let mut violations = Vec::new();
    let mut load = vec![Cost::zero(); g.arc_count()];
    let mut objective = Cost::zero();
    for (i, e) in ledger.entries.iter().enumerate() {
        objective += &e.value;
        if e.value.is_zero() {
            violations.push(format!("dual entry {i} has value 0"));
        }
        if e.set.iter().any(|v| v >= n) {
            violations.push(format!("dual entry {i} names a node out of range"));
            continue;
        }
        if e.set.contains(root) {
            violations.push(format!("dual entry {i} contains the root"));
        }
        let inside = e.set.mask(n);
        let mut induces = false;
        for (a, arc) in g.arcs().iter().enumerate() {
            match (inside[arc.tail], inside[arc.head]) {
                (true, true) => induces = true,
                (false, true) => load[a] += &e.value,
                _ => {}
            }
        }
        if !induces {
            violations.push(format!("dual entry {i} induces no arc"));
        }
    }
    for (a, arc) in g.arcs().iter().enumerate() {
        if load[a] > arc.cost {
            violations.push(format!(
                "arc {a} carries dual load {} above its cost {}",
                load[a], arc.cost
            ));
        }
    }
    (violations, objective)
}

/// Whether the ledger is a feasible dual solution, and its objective.
pub fn check_dual_feasibility(g: &Digraph, root: NodeId, ledger: &DualLedger) -> (bool, Cost) {
    let (violations, objective) = dual_violations(g, root, ledger);
    (violations.is_empty(), objective)
}

/// Full certificate check of a solver result.
///
/// Verifies the tree and the ledger from scratch, then that the cost is
/// at most `max(2, h_g)` times the dual objective. With an exact optimum
/// at hand it also checks `dual <= opt <= cost <= max(2, h_g) * opt`.
pub fn ratio_check(g: &Digraph, result: &SolveResult, optimum: Option<&Cost>) -> VerificationReport {
    let root = result.root;
    let mut report = verify_tree_cover(g, root, &result.tree.tree_arcs);
    let (dual_findings, objective) = dual_violations(g, root, &result.ledger);
    report.dual_feasible = dual_findings.is_empty();
    report.violations.extend(dual_findings);
    let cost = report.cost_recomputed.clone();
    if cost != result.tree.total_cost {
        report.violations.push(format!(
            "reported cost {} differs from {cost}",
            result.tree.total_cost
        ));
    }
    if objective != result.dual_lower_bound {
        report.violations.push(format!(
            "reported dual {} differs from ledger total {objective}",
            result.dual_lower_bound
        ));
    }
    let bound = ratio_bound(&result.h_g);
    if bound != result.ratio_bound {
        report.violations.push(format!(
            "reported ratio bound {} is not {bound}",
            result.ratio_bound
        ));
    }
    if cost > bound.mul(&objective) {
        report
            .violations
            .push(format!("cost {cost} exceeds {bound} times the dual {objective}"));
    }
    let b_total: Cost = result
        .ledger
        .entries
        .iter()
        .filter(|e| e.family == Family::B)
        .map(|e| &e.value)
        .sum();
    let t_total: Cost = result
        .ledger
        .entries
        .iter()
        .filter(|e| e.family == Family::T)
        .map(|e| &e.value)
        .sum();
    report.family_bound = Some(b_total.mul_int(2) + result.h_g.mul(&t_total));
    if let Some(opt) = optimum {
        if objective > *opt {
            report
                .violations
                .push(format!("dual {objective} exceeds the optimum {opt}"));
        }
        if *opt > cost {
            report
                .violations
                .push(format!("cost {cost} is below the optimum {opt}"));
        }
        if cost > bound.mul(opt) {
            report
                .violations
                .push(format!("cost {cost} exceeds {bound} times the optimum {opt}"));
        }
    }
    report.ratio_vs_dual = cost.checked_div(&objective);
    report.dual_objective = objective;
    report
}

/// Checks a certificate read from text against the graph: the tree, the
/// dual entries, and every claim the certificate makes about them.
pub fn verify_certificate(g: &Digraph, cert: &Certificate) -> VerificationReport {
    let arcs = match cert.resolve(g) {
        Ok(arcs) => arcs,
        Err((t, h)) => {
            let mut report = verify_tree_cover(g, cert.root, &ArcSet::new());
            report.is_branching = false;
            report.violations.insert(0, format!("no arc from {t} to {h}"));
            return report;
        }
    };
    let mut report = verify_tree_cover(g, cert.root, &arcs);
    if arcs.len() != cert.tree_arcs.len() {
        report.is_branching = false;
        report.violations.push("a tree arc is listed twice".into());
    }
    let ledger = DualLedger {
        entries: cert.entries.clone(),
        ..DualLedger::default()
    };
    let (dual_findings, objective) = dual_violations(g, cert.root, &ledger);
    report.dual_feasible = dual_findings.is_empty();
    report.violations.extend(dual_findings);
    let cost = report.cost_recomputed.clone();
    if let Some(claimed) = &cert.cost {
        if *claimed != cost {
            report
                .violations
                .push(format!("claimed cost {claimed} differs from {cost}"));
        }
    }
    if let Some(claimed) = &cert.dual_objective {
        if *claimed != objective {
            report.violations.push(format!(
                "claimed dual {claimed} differs from ledger total {objective}"
            ));
        }
    }
    if let Some(h) = &cert.h_g {
        let t_total: Cost = cert
            .entries
            .iter()
            .filter(|e| e.family == Family::T)
            .map(|e| &e.value)
            .sum();
        let b_total = &objective.saturating_sub(&t_total);
        report.family_bound = Some(b_total.mul_int(2) + h.mul(&t_total));
        if let Some(r) = &cert.ratio_bound {
            if *r != ratio_bound(h) {
                report
                    .violations
                    .push(format!("ratio bound {r} is not max(2, {h})"));
            }
        }
    }
    if let Some(r) = &cert.ratio_bound {
        if *r < Cost::from_integer(2) {
            report.violations.push(format!("ratio bound {r} is below 2"));
        }
        if cost > r.mul(&objective) {
            report
                .violations
                .push(format!("cost {cost} exceeds {r} times the dual {objective}"));
        }
    }
    report.ratio_vs_dual = cost.checked_div(&objective);
    report.dual_objective = objective;
    report
}
