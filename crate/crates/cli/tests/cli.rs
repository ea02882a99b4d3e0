use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use dtc_core::cost::ratio_bound;
use dtc_core::fixtures::{star, w2, w3};
use dtc_core::format::{emit_instance, emit_scp, parse_instance, Instance};
use dtc_core::generate::random_scp;
use dtc_core::{harmonic, Cost, Digraph};

fn dtc(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dtc"))
        .args(args)
        .current_dir(dir)
        .env_remove("DTC_THREADS")
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn put(dir: &Path, name: &str, g: Digraph, root: Option<usize>) {
    fs::write(dir.join(name), emit_instance(&Instance { graph: g, root })).unwrap();
}

#[test]
fn solve_w2_prints_certificate() {
    let dir = tempfile::tempdir().unwrap();
    put(dir.path(), "w2.dtc", w2(), Some(0));
    let out = dtc(dir.path(), &["solve", "-i", "w2.dtc"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("cost 1\n") && text.contains("dual 1\n"), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("tree_arc ")).count(), 2);
    assert!(text.contains("# phase2"));
}

#[test]
fn solve_star_is_empty() {
    let dir = tempfile::tempdir().unwrap();
    put(dir.path(), "star.dtc", star(), Some(0));
    let text = stdout(&dtc(dir.path(), &["solve", "-i", "star.dtc"]));
    assert!(text.contains("cost 0\n"));
    assert!(!text.contains("tree_arc"));
}

#[test]
fn infeasible_and_malformed_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let one = Cost::one;
    let g = Digraph::from_triples(4, [(0, 1, one()), (2, 3, one())]).unwrap();
    put(dir.path(), "split.dtc", g, None);
    assert_eq!(
        dtc(dir.path(), &["solve", "-i", "split.dtc"]).status.code(),
        Some(2)
    );
    assert_eq!(
        dtc(dir.path(), &["exact", "-i", "split.dtc"]).status.code(),
        Some(2)
    );

    fs::write(dir.path().join("bad.dtc"), "nodes 3\narc 0 1 2\narc 1 x 1\n").unwrap();
    let out = dtc(dir.path(), &["solve", "-i", "bad.dtc"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    assert_eq!(dtc(dir.path(), &["solve"]).status.code(), Some(1));
    assert_eq!(
        dtc(dir.path(), &["solve", "-i", "split.dtc", "--root", "9"])
            .status
            .code(),
        Some(1)
    );

    let out = Command::new(env!("CARGO_BIN_EXE_dtc"))
        .args(["gen", "--nodes", "3", "--arcs", "2", "--seed", "1"])
        .env("DTC_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn exact_w3() {
    let dir = tempfile::tempdir().unwrap();
    put(dir.path(), "w3.dtc", w3(), Some(0));
    let out = dtc(dir.path(), &["exact", "-i", "w3.dtc"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("cost 5\n"));
    let out = dtc(dir.path(), &["exact", "-i", "w3.dtc", "--max-arcs", "3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_accepts_solver_output_and_rejects_edits() {
    let dir = tempfile::tempdir().unwrap();
    put(dir.path(), "w2.dtc", w2(), Some(0));
    let cert = stdout(&dtc(dir.path(), &["solve", "-i", "w2.dtc"]));
    fs::write(dir.path().join("good.cert"), &cert).unwrap();
    let out = dtc(dir.path(), &["verify", "-i", "w2.dtc", "-c", "good.cert"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("violations 0"));

    fs::write(dir.path().join("bad.cert"), cert.replace("cost 1", "cost 0")).unwrap();
    let out = dtc(dir.path(), &["verify", "-i", "w2.dtc", "-c", "bad.cert"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("violation claimed cost"));

    fs::write(dir.path().join("junk.cert"), "root 0\nfrobnicate\n").unwrap();
    let out = dtc(dir.path(), &["verify", "-i", "w2.dtc", "-c", "junk.cert"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reduce_scp_writes_graph_and_map() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("in.scp"),
        "elements 2\nset 3 0 1\nset 1 0\nset 1 1\n",
    )
    .unwrap();
    let out = dtc(dir.path(), &["reduce-scp", "-i", "in.scp", "-o", "out.dtc"]);
    assert_eq!(out.status.code(), Some(0));
    let inst = parse_instance(&fs::read_to_string(dir.path().join("out.dtc")).unwrap()).unwrap();
    // 1 + q + 2p nodes and q + 4 + p arcs
    assert_eq!((inst.graph.node_count(), inst.graph.arc_count()), (8, 9));
    assert_eq!(inst.root, Some(0));
    let map = fs::read_to_string(dir.path().join("out.dtc.map")).unwrap();
    assert!(map.contains("subset 2 node 3 arc 2\n"));
    assert!(map.contains("element 1 node 5 copy 7\n"));
}

#[test]
fn gen_contracts() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let a = dtc(d, &["gen", "--nodes", "4", "--arcs", "5", "--seed", "7"]);
    let b = dtc(d, &["gen", "--nodes", "4", "--arcs", "5", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);

    let single = parse_instance(&stdout(&dtc(
        d,
        &["gen", "--nodes", "2", "--arcs", "1", "--seed", "3"],
    )))
    .unwrap();
    assert_eq!((single.graph.node_count(), single.graph.arc_count()), (2, 1));

    let out = dtc(
        d,
        &[
            "gen",
            "--nodes",
            "9",
            "--arcs",
            "20",
            "--zero-frac",
            "1.0",
            "--seed",
            "4",
            "-o",
            "z.dtc",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let zero = parse_instance(&fs::read_to_string(d.join("z.dtc")).unwrap()).unwrap();
    assert!(zero.graph.arcs().iter().all(|a| a.cost.is_zero()));
    for r in 0..9 {
        let out = dtc(d, &["solve", "-i", "z.dtc", "--root", &r.to_string()]);
        match out.status.code() {
            Some(0) => assert!(stdout(&out).contains("cost 0\n")),
            code => assert_eq!(code, Some(2)),
        }
    }

    assert_eq!(
        dtc(d, &["gen", "--nodes", "1", "--arcs", "1", "--seed", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        dtc(
            d,
            &[
                "gen",
                "--nodes",
                "3",
                "--arcs",
                "1",
                "--zero-frac",
                "2",
                "--seed",
                "1"
            ]
        )
        .status
        .code(),
        Some(1)
    );
}

fn csv_rows(path: &Path) -> Vec<csv::StringRecord> {
    csv::Reader::from_path(path)
        .unwrap()
        .records()
        .map(|r| r.unwrap())
        .collect()
}

#[test]
fn bench_empty_directory() {
    let dir = tempfile::tempdir().unwrap();
    fs::create_dir(dir.path().join("none")).unwrap();
    let out = dtc(dir.path(), &["bench", "--dir", "none", "--report", "r.csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(dir.path().join("r.csv")).unwrap();
    assert_eq!(
        text,
        "instance,n,m,root,alg_cost,opt_cost,dual,H_g,ratio_alg_opt,ratio_alg_dual,certificate_ok\n"
    );
}

#[test]
fn bench_generated_rows_all_certify() {
    let dir = tempfile::tempdir().unwrap();
    let out = dtc(
        dir.path(),
        &[
            "bench",
            "--count",
            "100",
            "--nodes",
            "7",
            "--arcs",
            "18",
            "--zero-frac",
            "0.3",
            "--seed",
            "40",
            "--report",
            "r.csv",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&dir.path().join("r.csv"));
    assert_eq!(rows.len(), 101);
    let names: Vec<&str> = rows[..100].iter().map(|r| &r[0]).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    for row in &rows {
        assert!(&row[10] == "true" || &row[4] == "infeasible", "{row:?}");
    }
    assert_eq!(&rows[100][0], "SUMMARY");
}

#[test]
fn bench_set_cover_family_within_harmonic_bound() {
    let dir = tempfile::tempdir().unwrap();
    let sets = dir.path().join("sets");
    fs::create_dir(&sets).unwrap();
    let mut written = Vec::new();
    for p in 2..=5usize {
        let mut seed = 100 * p as u64;
        let mut made = 0;
        while made < 5 {
            seed += 1;
            let scp = random_scp(p, 4, 4, seed).unwrap();
            if !scp.is_coverable() {
                continue;
            }
            let name = format!("p{p}-{seed}.scp");
            fs::write(sets.join(&name), emit_scp(&scp)).unwrap();
            written.push((name, p));
            made += 1;
        }
    }
    let out = dtc(
        dir.path(),
        &["bench", "--dir", "sets", "--report", "r.csv", "--max-arcs", "26"],
    );
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&dir.path().join("r.csv"));
    for (name, p) in written {
        let row = rows.iter().find(|r| &r[0] == name.as_str()).unwrap();
        assert_eq!(&row[10], "true", "{row:?}");
        if !row[8].is_empty() {
            let ratio: Cost = row[8].parse().unwrap();
            assert!(ratio <= ratio_bound(&harmonic(p)), "{row:?}");
        }
    }
}
