//! Acceptance suite. Runs without the libtest harness so that each
//! criterion prints exactly one PASS or FAIL line; the process fails if
//! any criterion does.

use std::fmt::Display;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use dtc_core::cost::ratio_bound;
use dtc_core::fixtures::{w1, w2, w3};
use dtc_core::format::{emit_instance, emit_scp, Instance};
use dtc_core::generate::{random_graph, random_scp, GraphParams};
use dtc_core::graph::{self, NodeSet};
use dtc_core::oracle::{exact_all_roots, exact_by_vertex_sets, exact_min_cover};
use dtc_core::reduction::{exact_scp, lift_cover, reduce};
use dtc_core::verify::{check_dual_feasibility, verify_tree_cover};
use dtc_core::{harmonic, solve_root, Cost, Digraph, ExtCost, Family, SolveError, SolveResult, SolverState};

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(failures: &[String], detail: impl Display) -> Outcome {
        for f in failures.iter().take(5) {
            println!("    {f}");
        }
        Outcome {
            pass: failures.is_empty(),
            detail: if failures.is_empty() {
                detail.to_string()
            } else {
                format!("{detail}; {} failures", failures.len())
            },
        }
    }

    fn within(mut self, elapsed: Duration, limit: Duration) -> Outcome {
        if elapsed > limit {
            self.pass = false;
            self.detail = format!("{}; took longer than {}s", self.detail, limit.as_secs());
        }
        self
    }
}

fn main() {
    type Check = fn() -> Outcome;
    let criteria: [(&str, Check); 8] = [
        ("ratio against the optimum", ratio_against_optimum),
        ("dual certificate", dual_certificate),
        ("weak duality", weak_duality),
        ("set cover equivalence", set_cover_equivalence),
        ("structural invariants", structural_invariants),
        ("hand-traced fixtures", hand_traced_fixtures),
        ("star instances", star_instances),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = check();
        let verdict = if out.pass { "PASS" } else { "FAIL" };
        println!(
            "{verdict} criterion {}: {name}: {} ({:.1}s)",
            i + 1,
            out.detail,
            start.elapsed().as_secs_f64()
        );
        failed += usize::from(!out.pass);
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}

/// 360 instances with 3 to 9 nodes, at most 18 arcs and zero-cost
/// fractions cycling through 0, 0.3 and 0.6.
fn small_corpus() -> Vec<Digraph> {
    (0..360u64)
        .map(|s| {
            let params = GraphParams {
                nodes: 3 + (s % 7) as usize,
                arcs: 1 + ((s * 5 + s / 7) % 18) as usize,
                max_cost: 1 + s % 9,
                zero_frac: [0.0, 0.3, 0.6][(s % 3) as usize],
            };
            random_graph(&params, s).unwrap()
        })
        .collect()
}

/// 1000 instances with 10 to 60 nodes and up to 400 arcs.
fn large_corpus() -> Vec<Digraph> {
    (0..1000u64)
        .map(|s| {
            let nodes = 10 + (s % 51) as usize;
            let params = GraphParams {
                nodes,
                arcs: nodes + (s * 53 % (401 - nodes as u64)) as usize,
                max_cost: 1 + s % 20,
                zero_frac: [0.0, 0.3, 0.6][(s % 3) as usize],
            };
            random_graph(&params, 50_000 + s).unwrap()
        })
        .collect()
}

/// Solver run and oracle optimum for every root of every small instance.
struct RootedRun {
    instance: usize,
    root: usize,
    solved: Result<SolveResult, SolveError>,
    optimum: Option<Cost>,
}

fn small_runs(corpus: &[Digraph]) -> Vec<RootedRun> {
    corpus
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, g)| {
            let opt = exact_all_roots(g, 18).expect("small instances fit the oracle");
            g.nodes().map(move |r| RootedRun {
                instance: i,
                root: r,
                solved: solve_root(g, r),
                optimum: opt[r].as_ref().map(|t| t.total_cost.clone()),
            })
        })
        .collect()
}

fn ratio_against_optimum() -> Outcome {
    let start = Instant::now();
    let corpus = small_corpus();
    let runs = small_runs(&corpus);
    let mut failures = Vec::new();
    let mut feasible = 0;
    let mut worst = ExtCost::Finite(Cost::zero());
    for run in &runs {
        let tag = format!("instance {} root {}", run.instance, run.root);
        match (&run.solved, &run.optimum) {
            (Ok(res), Some(opt)) => {
                feasible += 1;
                let cost = &res.tree.total_cost;
                let bound = ratio_bound(&harmonic(res.g_param));
                if *cost > bound.mul(opt) {
                    failures.push(format!("{tag}: cost {cost} above {bound} times optimum {opt}"));
                }
                let r = cost.checked_div(opt).map_or(
                    if cost.is_zero() {
                        ExtCost::Finite(Cost::one())
                    } else {
                        ExtCost::Infinite
                    },
                    ExtCost::Finite,
                );
                worst = worst.max(r);
            }
            (Err(SolveError::InfeasibleRoot { .. }), None) => {}
            (Ok(_), None) => failures.push(format!(
                "{tag}: solver found a cover the oracle says cannot exist"
            )),
            (Err(e), _) => failures.push(format!("{tag}: {e}")),
        }
    }
    let detail = format!(
        "{} instances, {feasible} feasible rooted runs, worst alg/opt {worst}",
        corpus.len()
    );
    Outcome::new(&failures, detail).within(start.elapsed(), Duration::from_secs(120))
}

/// Ledger checks of one run; the bound is recomputed from the entries.
fn ledger_findings(g: &Digraph, res: &SolveResult) -> Vec<String> {
    let mut out = Vec::new();
    let (feasible, objective) = check_dual_feasibility(g, res.root, &res.ledger);
    if !feasible {
        out.push("ledger is not dual feasible".to_string());
    }
    if objective != res.dual_lower_bound {
        out.push(format!(
            "ledger sums to {objective}, reported {}",
            res.dual_lower_bound
        ));
    }
    let total = |f: Family| -> Cost {
        res.ledger
            .entries
            .iter()
            .filter(|e| e.family == f)
            .map(|e| &e.value)
            .sum()
    };
    let bound = total(Family::B).mul_int(2) + harmonic(res.g_param).mul(&total(Family::T));
    let cost = g.cost_of(res.tree.tree_arcs.iter());
    if cost > bound {
        out.push(format!("cost {cost} above 2B + H_g T = {bound}"));
    }
    out
}

fn dual_certificate() -> Outcome {
    let start = Instant::now();
    let small = small_corpus();
    let large = large_corpus();
    let all: Vec<&Digraph> = small.iter().chain(&large).collect();
    let per_instance: Vec<(usize, Vec<String>)> = all
        .par_iter()
        .enumerate()
        .map(|(i, g)| {
            let mut runs = 0;
            let mut failures = Vec::new();
            for r in g.nodes() {
                match solve_root(g, r) {
                    Ok(res) => {
                        runs += 1;
                        for f in ledger_findings(g, &res) {
                            failures.push(format!("instance {i} root {r}: {f}"));
                        }
                    }
                    Err(SolveError::InfeasibleRoot { .. }) => {}
                    Err(e) => failures.push(format!("instance {i} root {r}: {e}")),
                }
            }
            (runs, failures)
        })
        .collect();
    let runs: usize = per_instance.iter().map(|(k, _)| k).sum();
    let failures: Vec<String> = per_instance.into_iter().flat_map(|(_, f)| f).collect();
    let detail = format!(
        "{} small and {} large instances, {runs} feasible rooted runs",
        small.len(),
        large.len()
    );
    Outcome::new(&failures, detail).within(start.elapsed(), Duration::from_secs(60))
}

fn weak_duality() -> Outcome {
    let corpus = small_corpus();
    let runs = small_runs(&corpus);
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut gaps = 0;
    for run in &runs {
        let (Ok(res), Some(opt)) = (&run.solved, &run.optimum) else {
            continue;
        };
        checked += 1;
        let dual = &res.dual_lower_bound;
        let cost = &res.tree.total_cost;
        if !(dual <= opt && opt <= cost) {
            failures.push(format!(
                "instance {} root {}: dual {dual}, optimum {opt}, cost {cost}",
                run.instance, run.root
            ));
        }
        gaps += usize::from(dual < opt);
    }
    Outcome::new(
        &failures,
        format!("{checked} rooted runs, dual strictly below optimum on {gaps}"),
    )
}

fn set_cover_equivalence() -> Outcome {
    let results: Vec<(bool, bool, Vec<String>)> = (0..240u64)
        .into_par_iter()
        .map(|s| {
            let p = 1 + (s % 5) as usize;
            let q = 1 + (s / 5 % 6) as usize;
            let scp = random_scp(p, q, 4, 9_000 + s).unwrap();
            let (g, root, map) = reduce(&scp);
            let tag = format!("instance {s} (p={p}, q={q})");
            let mut failures = Vec::new();
            let scp_opt = exact_scp(&scp).unwrap().map(|(w, _)| w);
            let tree_opt = exact_by_vertex_sets(&g, root).unwrap().map(|t| t.total_cost);
            if scp_opt != tree_opt {
                failures.push(format!(
                    "{tag}: set cover optimum {scp_opt:?}, tree optimum {tree_opt:?}"
                ));
            }
            let small = g.arc_count() <= 18;
            if small {
                let arc_opt = exact_min_cover(&g, root, 18).unwrap().map(|t| t.total_cost);
                if arc_opt != tree_opt {
                    failures.push(format!("{tag}: the two tree oracles disagree"));
                }
            }
            match (solve_root(&g, root), &scp_opt) {
                (Ok(res), Some(opt)) => {
                    let alg = &res.tree.total_cost;
                    match lift_cover(&g, &map, &res.tree) {
                        Ok(chosen) if scp.is_cover(&chosen) && scp.weight(&chosen) <= *alg => {}
                        Ok(chosen) => {
                            failures.push(format!("{tag}: lifted {chosen:?} is not a cover within {alg}"))
                        }
                        Err(e) => failures.push(format!("{tag}: {e}")),
                    }
                    let bound = ratio_bound(&harmonic(p));
                    if *alg > bound.mul(opt) {
                        failures.push(format!("{tag}: cost {alg} above {bound} times {opt}"));
                    }
                }
                (Err(SolveError::InfeasibleRoot { .. }), None) => {}
                (other, _) => failures.push(format!(
                    "{tag}: solver returned {:?}",
                    other.map(|r| r.tree.total_cost)
                )),
            }
            (scp_opt.is_some(), small, failures)
        })
        .collect();
    let coverable = results.iter().filter(|r| r.0).count();
    let small = results.iter().filter(|r| r.1).count();
    let failures: Vec<String> = results.into_iter().flat_map(|r| r.2).collect();
    Outcome::new(
        &failures,
        format!("240 instances ({coverable} coverable, {small} also checked by arc enumeration)"),
    )
}

/// Invariants of the state right after the first phase, then of the output.
fn invariant_findings(g: &Digraph, r: usize) -> Vec<String> {
    let mut out = Vec::new();
    let mut st = SolverState::initialize(g, r).expect("valid root");
    match st.phase1() {
        Ok(()) => {}
        Err(SolveError::InfeasibleRoot { .. }) => return out,
        Err(e) => return vec![e.to_string()],
    }
    let a0 = st.a0();
    for (a, arc) in g.arcs().iter().enumerate() {
        if arc.tail == r || arc.head == r {
            continue;
        }
        let pair = [arc.tail, arc.head];
        let entered = a0.iter().any(|b| {
            let e = g.arc(b);
            pair.contains(&e.head) && !pair.contains(&e.tail)
        });
        if !entered {
            out.push(format!("no saturated arc enters the ends of arc {a}"));
        }
    }
    let c = st.classify();
    for arc in g.arcs() {
        if c.sources.contains(arc.tail) && c.sources.contains(arc.head) {
            out.push(format!("sources {} and {} are adjacent", arc.tail, arc.head));
        }
    }
    if !graph::is_vertex_cover(g, &c.u_set) {
        out.push("u_set is not a vertex cover".into());
    }
    // every sink hangs below a critical or reachable node through A0
    let mut from = c.criticals.clone();
    from.union_with(&c.reachable);
    let mut seen = from.mask(g.node_count());
    let mut stack: Vec<usize> = from.iter().collect();
    while let Some(x) = stack.pop() {
        for &b in g.out_arcs(x) {
            let h = g.arc(b).head;
            if a0.contains(b) && !seen[h] {
                seen[h] = true;
                stack.push(h);
            }
        }
    }
    if let Some(s) = c.sinks.iter().find(|&s| !seen[s]) {
        out.push(format!("sink {s} hangs below no critical or reachable node"));
    }
    match solve_root(g, r) {
        Ok(res) => {
            let report = verify_tree_cover(g, r, &res.tree.tree_arcs);
            out.extend(report.violations);
        }
        Err(SolveError::InfeasibleRoot { .. }) => {}
        Err(e) => out.push(e.to_string()),
    }
    out
}

fn structural_invariants() -> Outcome {
    let small = small_corpus();
    let large = large_corpus();
    let all: Vec<&Digraph> = small.iter().chain(&large).collect();
    let per_instance: Vec<(usize, Vec<String>)> = all
        .par_iter()
        .enumerate()
        .map(|(i, g)| {
            let failures = g
                .nodes()
                .flat_map(|r| {
                    invariant_findings(g, r)
                        .into_iter()
                        .map(move |f| format!("instance {i} root {r}: {f}"))
                })
                .collect();
            (g.node_count(), failures)
        })
        .collect();
    let runs: usize = per_instance.iter().map(|(n, _)| n).sum();
    let failures: Vec<String> = per_instance.into_iter().flat_map(|(_, f)| f).collect();
    Outcome::new(&failures, format!("{runs} rooted runs"))
}

fn hand_traced_fixtures() -> Outcome {
    let mut failures = Vec::new();
    for (name, g, expected) in [("W1", w1(), 2u64), ("W2", w2(), 1), ("W3", w3(), 5)] {
        let expected = Cost::from_integer(expected);
        let opt = exact_min_cover(&g, 0, 18).unwrap().map(|t| t.total_cost);
        if opt.as_ref() != Some(&expected) {
            failures.push(format!("{name}: oracle gives {opt:?}, expected {expected}"));
        }
        match solve_root(&g, 0) {
            Ok(res) => {
                if res.tree.total_cost != expected || res.dual_lower_bound != expected {
                    failures.push(format!(
                        "{name}: cost {} dual {}, expected {expected} for both",
                        res.tree.total_cost, res.dual_lower_bound
                    ));
                }
                if name == "W2" {
                    failures.extend(w2_entry(&g, &res));
                }
            }
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    Outcome::new(&failures, "costs 2, 1, 5 and duals 2, 1, 5 at root 0")
}

/// The W2 ledger holds `({S1, S2, e1}, 1)` and it makes arc `(r, S1)` tight.
fn w2_entry(g: &Digraph, res: &SolveResult) -> Vec<String> {
    let target = NodeSet::from([1, 2, 3]);
    let Some(entry) = res.ledger.entries.iter().find(|e| e.set == target) else {
        return vec![format!(
            "W2: no ledger entry for {{1,2,3}}: {:?}",
            res.ledger.entries
        )];
    };
    let mut out = Vec::new();
    if entry.value != Cost::one() {
        out.push(format!("W2: entry value {}", entry.value));
    }
    let arc = g.cheapest_arc_between(0, 1).expect("W2 has (r, S1)");
    let (t, h) = (g.arc(arc).tail, g.arc(arc).head);
    let load: Cost = res
        .ledger
        .entries
        .iter()
        .filter(|e| e.set.contains(h) && !e.set.contains(t))
        .map(|e| &e.value)
        .sum();
    if load != g.arc(arc).cost {
        out.push(format!(
            "W2: arc (r, S1) carries {load}, not its cost {}",
            g.arc(arc).cost
        ));
    }
    out
}

fn star_instances() -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    for leaves in 1..=8usize {
        for variant in 0..4u64 {
            count += 1;
            let arcs = (1..=leaves).map(|v| (0, v, Cost::from_integer((v as u64 * 7 + variant * 3) % 10)));
            let g = Digraph::from_triples(leaves + 1, arcs).unwrap();
            match solve_root(&g, 0) {
                Ok(res) if res.tree.tree_arcs.is_empty() && res.tree.total_cost.is_zero() => {}
                Ok(res) => failures.push(format!(
                    "{leaves} leaves: tree {:?} cost {}",
                    res.tree.tree_arcs, res.tree.total_cost
                )),
                Err(e) => failures.push(format!("{leaves} leaves: {e}")),
            }
        }
    }
    Outcome::new(&failures, format!("{count} stars solved with the empty tree"))
}

fn dtc(args: &[&str], threads: &str, dir: &Path) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_dtc"))
        .args(args)
        .current_dir(dir)
        .env("DTC_THREADS", threads)
        .output()
        .expect("the dtc binary runs");
    let mut bytes = out.stdout;
    bytes.extend(format!("\nexit {:?}\n", out.status.code()).as_bytes());
    bytes
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path();
    let write = |name: &str, text: String| std::fs::write(path.join(name), text).unwrap();
    write(
        "w2.dtc",
        emit_instance(&Instance {
            graph: w2(),
            root: Some(0),
        }),
    );
    write(
        "w3.dtc",
        emit_instance(&Instance {
            graph: w3(),
            root: Some(0),
        }),
    );
    std::fs::create_dir(path.join("batch")).unwrap();
    for s in 0..12u64 {
        let params = GraphParams {
            nodes: 4 + (s % 6) as usize,
            arcs: 6 + (s % 12) as usize,
            max_cost: 9,
            zero_frac: 0.3,
        };
        let g = random_graph(&params, 300 + s).unwrap();
        write(
            &format!("batch/g{s:02}.dtc"),
            emit_instance(&Instance { graph: g, root: None }),
        );
    }
    let scp = (11..)
        .map(|s| random_scp(4, 5, 4, s).unwrap())
        .find(|scp| scp.is_coverable())
        .unwrap();
    write("batch/cover.scp", emit_scp(&scp));

    let commands: Vec<Vec<&str>> = vec![
        vec![
            "gen",
            "--nodes",
            "30",
            "--arcs",
            "120",
            "--zero-frac",
            "0.3",
            "--seed",
            "5",
            "-o",
            "big.dtc",
        ],
        vec!["solve", "-i", "big.dtc", "--trace"],
        vec!["solve", "-i", "w2.dtc"],
        vec!["exact", "-i", "w3.dtc"],
        vec!["reduce-scp", "-i", "batch/cover.scp", "-o", "cover.dtc"],
        vec!["solve", "-i", "cover.dtc", "--trace"],
        vec!["bench", "--dir", "batch", "--report", "dir.csv"],
        vec![
            "bench", "--count", "40", "--nodes", "8", "--arcs", "16", "--seed", "2", "--report", "gen.csv",
        ],
    ];
    let outputs = ["big.dtc", "cover.dtc", "cover.dtc.map", "dir.csv", "gen.csv"];
    let transcript = |threads: &str| -> Vec<u8> {
        let mut all = Vec::new();
        for args in &commands {
            all.extend(dtc(args, threads, path));
        }
        for f in outputs {
            all.extend(std::fs::read(path.join(f)).unwrap_or_default());
        }
        all
    };
    let first = transcript("1");
    let again = transcript("1");
    let four = transcript("4");
    let mut failures = Vec::new();
    if first != again {
        failures.push("two runs with one thread differ".to_string());
    }
    if first != four {
        failures.push("one thread and four threads differ".to_string());
    }
    let text = String::from_utf8_lossy(&first);
    if text.contains("exit Some(1)") || text.contains("exit Some(2)") || text.contains("exit None") {
        failures.push("a command failed".to_string());
    }
    Outcome::new(
        &failures,
        format!(
            "{} commands, {} bytes compared three ways",
            commands.len(),
            first.len()
        ),
    )
}
