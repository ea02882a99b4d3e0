//! Batch runs with a CSV ratio report.
//!
//! Every instance is solved over all roots (or its own root line), and
//! when it is small enough the exhaustive oracle supplies the optimum for
//! the root the solver picked. Ratios are exact rationals, `inf` when the
//! denominator is zero and the numerator is not.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use rayon::prelude::*;

use dtc_core::format;
use dtc_core::generate::{random_graph, GraphParams};
use dtc_core::oracle::exact_all_roots;
use dtc_core::reduction::{lift_cover, reduce, ReductionMap, ScpInstance};
use dtc_core::verify::ratio_check;
use dtc_core::{solve, solve_root, Cost, Digraph, ExtCost, NodeId, SolveError};

pub enum Source {
    Dir(PathBuf),
    Generated {
        params: GraphParams,
        seed: u64,
        count: u64,
    },
}

pub const HEADER: [&str; 11] = [
    "instance",
    "n",
    "m",
    "root",
    "alg_cost",
    "opt_cost",
    "dual",
    "H_g",
    "ratio_alg_opt",
    "ratio_alg_dual",
    "certificate_ok",
];

struct Job {
    name: String,
    graph: Digraph,
    root: Option<NodeId>,
    scp: Option<(ScpInstance, ReductionMap)>,
}

#[derive(Default)]
struct Row {
    instance: String,
    n: String,
    m: String,
    root: String,
    alg_cost: String,
    opt_cost: String,
    dual: String,
    h_g: Option<Cost>,
    ratio_alg_opt: Option<ExtCost>,
    ratio_alg_dual: Option<ExtCost>,
    /// `None` when nothing could be checked.
    ok: Option<bool>,
}

impl Row {
    fn fields(&self) -> [String; 11] {
        let show = |x: &Option<ExtCost>| x.as_ref().map(|r| r.to_string()).unwrap_or_default();
        [
            self.instance.clone(),
            self.n.clone(),
            self.m.clone(),
            self.root.clone(),
            self.alg_cost.clone(),
            self.opt_cost.clone(),
            self.dual.clone(),
            self.h_g.as_ref().map(|h| h.to_string()).unwrap_or_default(),
            show(&self.ratio_alg_opt),
            show(&self.ratio_alg_dual),
            self.ok.map(|b| b.to_string()).unwrap_or_default(),
        ]
    }
}

fn ratio(num: &Cost, den: &Cost) -> ExtCost {
    match num.checked_div(den) {
        Some(r) => ExtCost::Finite(r),
        None if num.is_zero() => ExtCost::Finite(Cost::one()),
        None => ExtCost::Infinite,
    }
}

pub fn run(source: &Source, report: &Path, max_arcs: usize) -> Result<()> {
    let mut rows: Vec<Row> = match source {
        Source::Dir(dir) => {
            let (jobs, mut failed) = load_dir(dir)?;
            failed.extend(jobs.par_iter().map(|j| evaluate(j, max_arcs)).collect::<Vec<_>>());
            failed
        }
        Source::Generated { params, seed, count } => {
            params.validate()?;
            (0..*count)
                .into_par_iter()
                .map(|i| {
                    let s = seed.wrapping_add(i);
                    let job = Job {
                        name: format!("gen-{s:06}"),
                        graph: random_graph(params, s).expect("parameters were validated"),
                        root: None,
                        scp: None,
                    };
                    evaluate(&job, max_arcs)
                })
                .collect()
        }
    };
    rows.sort_by(|a, b| a.instance.cmp(&b.instance));
    if !rows.is_empty() {
        rows.push(summary(&rows));
    }
    let mut w = csv::Writer::from_path(report).with_context(|| format!("writing {}", report.display()))?;
    w.write_record(HEADER)?;
    for row in &rows {
        w.write_record(row.fields())?;
    }
    w.flush()?;
    Ok(())
}

/// Jobs for the `.dtc` and `.scp` files of `dir`, plus rows for files that
/// failed to parse.
fn load_dir(dir: &Path) -> Result<(Vec<Job>, Vec<Row>)> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    paths.sort();
    let mut jobs = Vec::new();
    let mut failed = Vec::new();
    for path in paths {
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
        if !path.is_file() || !matches!(ext, "dtc" | "scp") {
            continue;
        }
        let name = path
            .file_name()
            .unwrap_or_default()
            .to_string_lossy()
            .into_owned();
        let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        let job = if ext == "scp" {
            format::parse_scp(&text).map(|scp| {
                let (graph, root, map) = reduce(&scp);
                Job {
                    name: name.clone(),
                    graph,
                    root: Some(root),
                    scp: Some((scp, map)),
                }
            })
        } else {
            format::parse_instance(&text).map(|inst| Job {
                name: name.clone(),
                graph: inst.graph,
                root: inst.root,
                scp: None,
            })
        };
        match job {
            Ok(job) => jobs.push(job),
            Err(e) => {
                eprintln!("{name}: {e}");
                failed.push(Row {
                    instance: name,
                    alg_cost: "error".into(),
                    ok: Some(false),
                    ..Row::default()
                });
            }
        }
    }
    Ok((jobs, failed))
}

fn evaluate(job: &Job, max_arcs: usize) -> Row {
    let g = &job.graph;
    let mut row = Row {
        instance: job.name.clone(),
        n: g.node_count().to_string(),
        m: g.arc_count().to_string(),
        ..Row::default()
    };
    // per-root optima, when the instance is small enough
    let optima: Option<Vec<Option<Cost>>> = (g.arc_count() <= max_arcs)
        .then(|| exact_all_roots(g, max_arcs).ok())
        .flatten()
        .map(|all| all.into_iter().map(|t| t.map(|t| t.total_cost)).collect());
    let res = match job.root {
        Some(r) => solve_root(g, r),
        None => solve(g),
    };
    let res = match res {
        Ok(res) => res,
        Err(SolveError::Infeasible | SolveError::InfeasibleRoot { .. }) => {
            row.alg_cost = "infeasible".into();
            row.root = job.root.map(|r| r.to_string()).unwrap_or_default();
            row.ok = optima.map(|opt| match job.root {
                Some(r) => opt[r].is_none(),
                None => opt.iter().all(Option::is_none),
            });
            return row;
        }
        Err(e) => {
            eprintln!("{}: {e}", job.name);
            row.alg_cost = "error".into();
            row.ok = Some(false);
            return row;
        }
    };
    let cost = &res.tree.total_cost;
    row.root = res.root.to_string();
    row.alg_cost = cost.to_string();
    row.dual = res.dual_lower_bound.to_string();
    row.h_g = Some(res.h_g.clone());
    row.ratio_alg_dual = Some(ratio(cost, &res.dual_lower_bound));
    let opt = optima.as_ref().map(|o| o[res.root].clone());
    let mut ok = !matches!(opt, Some(None));
    if let Some(Some(opt)) = &opt {
        row.opt_cost = opt.to_string();
        row.ratio_alg_opt = Some(ratio(cost, opt));
    }
    ok &= ratio_check(g, &res, opt.flatten().as_ref()).ok();
    if let Some((scp, map)) = &job.scp {
        ok &= lift_cover(g, map, &res.tree)
            .is_ok_and(|chosen| scp.is_cover(&chosen) && scp.weight(&chosen) <= *cost);
    }
    row.ok = Some(ok);
    row
}

fn summary(rows: &[Row]) -> Row {
    Row {
        instance: "SUMMARY".into(),
        h_g: rows.iter().filter_map(|r| r.h_g.clone()).max(),
        ratio_alg_opt: rows.iter().filter_map(|r| r.ratio_alg_opt.clone()).max(),
        ratio_alg_dual: rows.iter().filter_map(|r| r.ratio_alg_dual.clone()).max(),
        ok: Some(rows.iter().all(|r| r.ok != Some(false))),
        ..Row::default()
    }
}
