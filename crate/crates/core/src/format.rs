//! Line-based text formats for instances, set cover instances and
//! certificates.
//!
//! All three share the same conventions: one record per line, keyword
//! first, whitespace-separated fields, `#` starts a comment, blank lines
//! are ignored. Costs are written as integers or reduced `p/q` and read
//! from integers, decimals or `p/q`.
//!
//! ```text
//! nodes 3
//! arc 0 1 2
//! arc 1 2 1/2
//! root 0
//! ```

use std::fmt::Write as _;
use std::str::FromStr;

use crate::cost::Cost;
use crate::error::ParseError;
use crate::graph::{Arc, ArcSet, Digraph, NodeId, NodeSet};
use crate::reduction::ScpInstance;
use crate::solver::{Family, LedgerEntry, SolveResult};

/// A graph with an optional designated root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub graph: Digraph,
    pub root: Option<NodeId>,
}

/// Records of one line: its 1-based number and its fields.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("");
        let fields: Vec<&str> = line.split_whitespace().collect();
        (!fields.is_empty()).then_some((i + 1, fields))
    })
}

fn field<T: FromStr>(line: usize, fields: &[&str], i: usize, what: &str) -> Result<T, ParseError> {
    let raw = fields
        .get(i)
        .ok_or_else(|| ParseError::new(line, format!("missing {what}")))?;
    raw.parse()
        .map_err(|_| ParseError::new(line, format!("invalid {what} {raw:?}")))
}

fn cost_field(line: usize, fields: &[&str], i: usize) -> Result<Cost, ParseError> {
    let raw = fields
        .get(i)
        .ok_or_else(|| ParseError::new(line, "missing cost"))?;
    raw.parse::<Cost>()
        .map_err(|e| ParseError::new(line, format!("{e}")))
}

fn arity(line: usize, fields: &[&str], n: usize) -> Result<(), ParseError> {
    if fields.len() != n {
        return Err(ParseError::new(
            line,
            format!(
                "{} expects {} fields, found {}",
                fields[0],
                n - 1,
                fields.len() - 1
            ),
        ));
    }
    Ok(())
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut nodes: Option<usize> = None;
    let mut root: Option<(usize, NodeId)> = None;
    let mut arcs = Vec::new();
    let mut last_line = 0;
    for (line, f) in records(text) {
        last_line = line;
        match f[0] {
            "nodes" => {
                arity(line, &f, 2)?;
                if nodes.is_some() {
                    return Err(ParseError::new(line, "duplicate nodes line"));
                }
                let n: usize = field(line, &f, 1, "node count")?;
                if n == 0 {
                    return Err(ParseError::new(line, "node count must be positive"));
                }
                nodes = Some(n);
            }
            "arc" => {
                arity(line, &f, 4)?;
                let n = nodes.ok_or_else(|| ParseError::new(line, "arc before nodes line"))?;
                let tail: NodeId = field(line, &f, 1, "tail")?;
                let head: NodeId = field(line, &f, 2, "head")?;
                for v in [tail, head] {
                    if v >= n {
                        return Err(ParseError::new(
                            line,
                            format!("node {v} out of range for {n} nodes"),
                        ));
                    }
                }
                if tail == head {
                    return Err(ParseError::new(line, format!("self-loop on node {tail}")));
                }
                arcs.push(Arc {
                    tail,
                    head,
                    cost: cost_field(line, &f, 3)?,
                });
            }
            "root" => {
                arity(line, &f, 2)?;
                if root.is_some() {
                    return Err(ParseError::new(line, "duplicate root line"));
                }
                root = Some((line, field(line, &f, 1, "root")?));
            }
            other => return Err(ParseError::new(line, format!("unknown keyword {other:?}"))),
        }
    }
    let n = nodes.ok_or_else(|| ParseError::new(last_line.max(1), "missing nodes line"))?;
    if let Some((line, r)) = root {
        if r >= n {
            return Err(ParseError::new(
                line,
                format!("root {r} out of range for {n} nodes"),
            ));
        }
    }
    let graph = Digraph::new(n, arcs).map_err(|e| ParseError::new(last_line, e.to_string()))?;
    Ok(Instance {
        graph,
        root: root.map(|(_, r)| r),
    })
}

pub fn emit_instance(inst: &Instance) -> String {
    let mut out = format!("nodes {}\n", inst.graph.node_count());
    for a in inst.graph.arcs() {
        let _ = writeln!(out, "arc {} {} {}", a.tail, a.head, a.cost);
    }
    if let Some(r) = inst.root {
        let _ = writeln!(out, "root {r}");
    }
    out
}

pub fn parse_scp(text: &str) -> Result<ScpInstance, ParseError> {
    let mut elements: Option<usize> = None;
    let mut subsets = Vec::new();
    let mut last_line = 0;
    for (line, f) in records(text) {
        last_line = line;
        match f[0] {
            "elements" => {
                arity(line, &f, 2)?;
                if elements.is_some() {
                    return Err(ParseError::new(line, "duplicate elements line"));
                }
                let p: usize = field(line, &f, 1, "element count")?;
                if p == 0 || p > 63 {
                    return Err(ParseError::new(line, "element count must be between 1 and 63"));
                }
                elements = Some(p);
            }
            "set" => {
                let p = elements.ok_or_else(|| ParseError::new(line, "set before elements line"))?;
                let w = cost_field(line, &f, 1)?;
                let mut members = NodeSet::new();
                for i in 2..f.len() {
                    let e: usize = field(line, &f, i, "element")?;
                    if e >= p {
                        return Err(ParseError::new(
                            line,
                            format!("element {e} out of range for {p} elements"),
                        ));
                    }
                    members.insert(e);
                }
                subsets.push((w, members));
            }
            other => return Err(ParseError::new(line, format!("unknown keyword {other:?}"))),
        }
    }
    let p = elements.ok_or_else(|| ParseError::new(last_line.max(1), "missing elements line"))?;
    ScpInstance::new(p, subsets).map_err(|e| ParseError::new(last_line, e.to_string()))
}

pub fn emit_scp(scp: &ScpInstance) -> String {
    let mut out = format!("elements {}\n", scp.element_count());
    for (w, members) in scp.subsets() {
        out.push_str(&format!("set {w}"));
        for e in members.iter() {
            let _ = write!(out, " {e}");
        }
        out.push('\n');
    }
    out
}

/// A solution together with the claims it makes about itself. Tree arcs
/// are named by their endpoints; with parallel arcs the cheapest one
/// (then the lowest index) is meant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub root: NodeId,
    pub cost: Option<Cost>,
    pub dual_objective: Option<Cost>,
    pub h_g: Option<Cost>,
    pub ratio_bound: Option<Cost>,
    pub tree_arcs: Vec<(NodeId, NodeId)>,
    pub entries: Vec<LedgerEntry>,
}

impl Certificate {
    pub fn from_result(g: &Digraph, res: &SolveResult) -> Self {
        Certificate {
            root: res.root,
            cost: Some(res.tree.total_cost.clone()),
            dual_objective: Some(res.dual_lower_bound.clone()),
            h_g: Some(res.h_g.clone()),
            ratio_bound: Some(res.ratio_bound.clone()),
            tree_arcs: endpoints(g, &res.tree.tree_arcs),
            entries: res.ledger.entries.clone(),
        }
    }

    /// A bare tree with no dual part.
    pub fn from_tree(g: &Digraph, root: NodeId, arcs: &ArcSet) -> Self {
        Certificate {
            root,
            cost: Some(g.cost_of(arcs.iter())),
            dual_objective: None,
            h_g: None,
            ratio_bound: None,
            tree_arcs: endpoints(g, arcs),
            entries: Vec::new(),
        }
    }

    /// Arc ids of the tree, or the first pair that names no arc.
    pub fn resolve(&self, g: &Digraph) -> Result<ArcSet, (NodeId, NodeId)> {
        self.tree_arcs
            .iter()
            .map(|&(t, h)| {
                if t.max(h) >= g.node_count() {
                    return Err((t, h));
                }
                g.cheapest_arc_between(t, h).ok_or((t, h))
            })
            .collect()
    }
}

fn endpoints(g: &Digraph, arcs: &ArcSet) -> Vec<(NodeId, NodeId)> {
    arcs.iter().map(|a| (g.arc(a).tail, g.arc(a).head)).collect()
}

pub fn emit_certificate(cert: &Certificate) -> String {
    let mut out = format!("root {}\n", cert.root);
    if let Some(c) = &cert.cost {
        let _ = writeln!(out, "cost {c}");
    }
    if let Some(d) = &cert.dual_objective {
        let _ = writeln!(out, "dual {d}");
    }
    if let Some(h) = &cert.h_g {
        let _ = writeln!(out, "h_g {h}");
    }
    if let Some(r) = &cert.ratio_bound {
        let _ = writeln!(out, "ratio_bound {r}");
    }
    for (t, h) in &cert.tree_arcs {
        let _ = writeln!(out, "tree_arc {t} {h}");
    }
    for e in &cert.entries {
        let _ = writeln!(out, "family {}", e.family);
        let _ = write!(out, "dual {}", e.value);
        for v in e.set.iter() {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}

pub fn parse_certificate(text: &str) -> Result<Certificate, ParseError> {
    let mut root = None;
    let mut cert = Certificate {
        root: 0,
        cost: None,
        dual_objective: None,
        h_g: None,
        ratio_bound: None,
        tree_arcs: Vec::new(),
        entries: Vec::new(),
    };
    let mut family: Option<Family> = None;
    let mut last_line = 0;
    let once = |line: usize, slot: &mut Option<Cost>, f: &[&str]| -> Result<(), ParseError> {
        arity(line, f, 2)?;
        if slot.is_some() {
            return Err(ParseError::new(line, format!("duplicate {} line", f[0])));
        }
        *slot = Some(cost_field(line, f, 1)?);
        Ok(())
    };
    for (line, f) in records(text) {
        last_line = line;
        match f[0] {
            "root" => {
                arity(line, &f, 2)?;
                if root.is_some() {
                    return Err(ParseError::new(line, "duplicate root line"));
                }
                root = Some(field(line, &f, 1, "root")?);
            }
            "cost" => once(line, &mut cert.cost, &f)?,
            "h_g" => once(line, &mut cert.h_g, &f)?,
            "ratio_bound" => once(line, &mut cert.ratio_bound, &f)?,
            "tree_arc" => {
                arity(line, &f, 3)?;
                cert.tree_arcs
                    .push((field(line, &f, 1, "tail")?, field(line, &f, 2, "head")?));
            }
            "family" => {
                arity(line, &f, 2)?;
                family = Some(match f[1] {
                    "B" => Family::B,
                    "T" => Family::T,
                    other => return Err(ParseError::new(line, format!("unknown family {other:?}"))),
                });
            }
            "dual" if f.len() == 2 && family.is_none() => once(line, &mut cert.dual_objective, &f)?,
            "dual" => {
                let fam = family
                    .take()
                    .ok_or_else(|| ParseError::new(line, "dual entry without a family line"))?;
                let value = cost_field(line, &f, 1)?;
                let mut set = NodeSet::new();
                for i in 2..f.len() {
                    set.insert(field(line, &f, i, "node")?);
                }
                if set.is_empty() {
                    return Err(ParseError::new(line, "dual entry names no nodes"));
                }
                cert.entries.push(LedgerEntry {
                    set,
                    value,
                    family: fam,
                });
            }
            other => return Err(ParseError::new(line, format!("unknown keyword {other:?}"))),
        }
    }
    if family.is_some() {
        return Err(ParseError::new(last_line, "family line without a dual entry"));
    }
    cert.root = root.ok_or_else(|| ParseError::new(last_line.max(1), "missing root line"))?;
    Ok(cert)
}
