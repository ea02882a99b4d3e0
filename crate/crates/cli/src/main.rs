//! `dtc`: solve, check and benchmark directed tree cover instances.
//!
//! Exit codes: 0 on success, 1 on usage, input or verification errors,
//! 2 when no branching cover exists.

mod bench;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use dtc_core::format::{self, Certificate, Instance};
use dtc_core::generate::{random_graph, GraphParams};
use dtc_core::oracle::{self, DEFAULT_MAX_ARCS};
use dtc_core::reduction::{reduce, ReductionMap};
use dtc_core::verify::{verify_certificate, VerificationReport};
use dtc_core::{solve, solve_root, Digraph, NodeId, SolveError, SolveResult};

#[derive(Parser)]
#[command(
    name = "dtc",
    version,
    about = "Minimum directed tree cover: approximate, exact and verified"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the primal-dual solver and print a certificate.
    Solve {
        #[arg(short, long)]
        input: PathBuf,
        /// Only try this root (default: the file's root line, else every node).
        #[arg(long)]
        root: Option<NodeId>,
        /// Print every trace event, not just the per-phase counts.
        #[arg(long)]
        trace: bool,
    },
    /// Exhaustive optimum with its witness tree.
    Exact {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long)]
        root: Option<NodeId>,
        #[arg(long, default_value_t = DEFAULT_MAX_ARCS)]
        max_arcs: usize,
    },
    /// Check a certificate against an instance.
    Verify {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        cert: PathBuf,
    },
    /// Turn a set cover instance into a rooted instance, with a `.map` sidecar.
    ReduceScp {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Write a seeded random instance.
    Gen {
        #[command(flatten)]
        params: GenArgs,
        #[arg(long)]
        seed: u64,
        /// Defaults to standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Solve a batch and write a CSV ratio report.
    Bench {
        /// Directory of `.dtc` instances and `.scp` set cover instances.
        #[arg(long, conflicts_with = "count")]
        dir: Option<PathBuf>,
        /// Generate this many instances instead, seeds `seed..seed+count`.
        #[arg(long, requires_all = ["nodes", "arcs"])]
        count: Option<u64>,
        #[arg(long)]
        nodes: Option<usize>,
        #[arg(long)]
        arcs: Option<usize>,
        #[arg(long, default_value_t = 10)]
        max_cost: u64,
        #[arg(long, default_value_t = 0.0)]
        zero_frac: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        report: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_ARCS)]
        max_arcs: usize,
    },
}

#[derive(Args, Clone)]
struct GenArgs {
    #[arg(long)]
    nodes: usize,
    #[arg(long)]
    arcs: usize,
    #[arg(long, default_value_t = 10)]
    max_cost: u64,
    #[arg(long, default_value_t = 0.0)]
    zero_frac: f64,
}

impl From<&GenArgs> for GraphParams {
    fn from(a: &GenArgs) -> Self {
        GraphParams {
            nodes: a.nodes,
            arcs: a.arcs,
            max_cost: a.max_cost,
            zero_frac: a.zero_frac,
        }
    }
}

/// Marks errors that mean "no cover exists" rather than bad input.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct Infeasible(String);

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let run = configure_threads().and_then(|()| run(cli.command));
    match run {
        Ok(code) => code,
        Err(e) if e.is::<Infeasible>() => {
            eprintln!("infeasible: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("DTC_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .with_context(|| format!("DTC_THREADS must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .context("configuring the thread pool")?;
    Ok(())
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Solve { input, root, trace } => cmd_solve(&input, root, trace),
        Command::Exact {
            input,
            root,
            max_arcs,
        } => cmd_exact(&input, root, max_arcs),
        Command::Verify { input, cert } => cmd_verify(&input, &cert),
        Command::ReduceScp { input, output } => cmd_reduce_scp(&input, &output),
        Command::Gen { params, seed, output } => cmd_gen(&params, seed, output.as_deref()),
        Command::Bench {
            dir,
            count,
            nodes,
            arcs,
            max_cost,
            zero_frac,
            seed,
            report,
            max_arcs,
        } => {
            let source = match (dir, count, nodes, arcs) {
                (Some(dir), None, _, _) => bench::Source::Dir(dir),
                (None, Some(count), Some(nodes), Some(arcs)) => bench::Source::Generated {
                    params: GraphParams {
                        nodes,
                        arcs,
                        max_cost,
                        zero_frac,
                    },
                    seed,
                    count,
                },
                _ => bail!("bench needs either --dir or --count with generator flags"),
            };
            bench::run(&source, &report, max_arcs)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load_instance(path: &Path) -> Result<Instance> {
    format::parse_instance(&read(path)?).with_context(|| path.display().to_string())
}

fn check_root(g: &Digraph, root: Option<NodeId>) -> Result<()> {
    if let Some(r) = root.filter(|&r| r >= g.node_count()) {
        bail!("root {r} out of range for {} nodes", g.node_count());
    }
    Ok(())
}

/// Runs the solver on `root` or on every root.
fn solve_instance(g: &Digraph, root: Option<NodeId>) -> Result<SolveResult> {
    let res = match root {
        Some(r) => solve_root(g, r),
        None => solve(g),
    };
    res.map_err(|e| match e {
        SolveError::Infeasible | SolveError::InfeasibleRoot { .. } => Infeasible(e.to_string()).into(),
        other => anyhow::Error::new(other),
    })
}

fn cmd_solve(input: &Path, root: Option<NodeId>, trace: bool) -> Result<ExitCode> {
    let inst = load_instance(input)?;
    let root = root.or(inst.root);
    check_root(&inst.graph, root)?;
    let res = solve_instance(&inst.graph, root)?;
    let mut out = format::emit_certificate(&Certificate::from_result(&inst.graph, &res));
    out.push_str(&phase_summary(&res, trace));
    print!("{out}");
    Ok(ExitCode::SUCCESS)
}

/// Comment lines, so the output still parses as a certificate.
fn phase_summary(res: &SolveResult, trace: bool) -> String {
    let mut out = String::new();
    let mut counts: Vec<(&str, usize)> = Vec::new();
    for ev in &res.phase_trace {
        match counts.last_mut() {
            Some((p, k)) if *p == ev.phase() => *k += 1,
            _ => counts.push((ev.phase(), 1)),
        }
        if trace {
            let _ = writeln!(out, "# {}: {ev}", ev.phase());
        }
    }
    for (phase, k) in counts {
        let _ = writeln!(out, "# {phase} {k} events");
    }
    let _ = writeln!(
        out,
        "# g {} greedy {} c1 {} c2 {}",
        res.g_param,
        res.used_greedy(),
        res.ledger.c1_total,
        res.ledger.c2_total
    );
    out
}

fn cmd_exact(input: &Path, root: Option<NodeId>, max_arcs: usize) -> Result<ExitCode> {
    let inst = load_instance(input)?;
    let root = root.or(inst.root);
    check_root(&inst.graph, root)?;
    let g = &inst.graph;
    let best = match root {
        Some(r) => oracle::exact_min_cover(g, r, max_arcs)?,
        None => oracle::exact_dtcp(g, max_arcs)?,
    };
    let Some(tree) = best else {
        return Err(Infeasible("no branching cover exists".into()).into());
    };
    print!(
        "{}",
        format::emit_certificate(&Certificate::from_tree(g, tree.root, &tree.tree_arcs))
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(input: &Path, cert_path: &Path) -> Result<ExitCode> {
    let inst = load_instance(input)?;
    let cert =
        format::parse_certificate(&read(cert_path)?).with_context(|| cert_path.display().to_string())?;
    let report = verify_certificate(&inst.graph, &cert);
    print!("{}", render_report(&report));
    Ok(if report.ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn render_report(r: &VerificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "is_branching {}", r.is_branching);
    let _ = writeln!(out, "is_cover {}", r.is_cover);
    let _ = writeln!(out, "cost {}", r.cost_recomputed);
    let _ = writeln!(out, "dual_feasible {}", r.dual_feasible);
    let _ = writeln!(out, "dual_objective {}", r.dual_objective);
    if let Some(x) = &r.ratio_vs_dual {
        let _ = writeln!(out, "ratio_vs_dual {x}");
    }
    if let Some(x) = &r.family_bound {
        let _ = writeln!(out, "family_bound {x}");
    }
    let _ = writeln!(out, "violations {}", r.violations.len());
    for v in &r.violations {
        let _ = writeln!(out, "violation {v}");
    }
    out
}

fn cmd_reduce_scp(input: &Path, output: &Path) -> Result<ExitCode> {
    let scp = format::parse_scp(&read(input)?).with_context(|| input.display().to_string())?;
    let (graph, root, map) = reduce(&scp);
    write(
        output,
        &format::emit_instance(&Instance {
            graph,
            root: Some(root),
        }),
    )?;
    let mut sidecar = output.as_os_str().to_owned();
    sidecar.push(".map");
    write(Path::new(&sidecar), &emit_map(&map))?;
    Ok(ExitCode::SUCCESS)
}

fn emit_map(map: &ReductionMap) -> String {
    let mut out = format!("root {}\n", map.root);
    for (i, (node, arc)) in map.subset_node.iter().zip(&map.subset_arc).enumerate() {
        let _ = writeln!(out, "subset {i} node {node} arc {arc}");
    }
    for (k, (node, copy)) in map.element_node.iter().zip(&map.element_prime_node).enumerate() {
        let _ = writeln!(out, "element {k} node {node} copy {copy}");
    }
    out
}

fn cmd_gen(params: &GenArgs, seed: u64, output: Option<&Path>) -> Result<ExitCode> {
    let graph = random_graph(&params.into(), seed)?;
    let text = format::emit_instance(&Instance { graph, root: None });
    match output {
        Some(path) => write(path, &text)?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}
