use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use pcs::ProfiledGraph;

fn pcs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcs"))
        .args(args)
        .output()
        .expect("run pcs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn fixture_query_text_output() {
    let o = pcs(&["query", "--fixture", "--q", "D", "--k", "2"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("\n2 communities\ncommunity 1: {B, C, D}\n  mct: r/CM/ML; r/CM/AI\n"));
    assert!(out.contains("community 2: {A, D, E}\n  mct: r/IS/DMS; r/HW\n"));
}

#[test]
fn no_community_is_not_an_error() {
    let o = pcs(&["query", "--fixture", "--q", "D", "--k", "9"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("\n0 communities\n"));
}

#[test]
fn exit_codes() {
    // Usage errors: bad flag, unknown vertex, conflicting sources.
    assert_eq!(pcs(&["query", "--fixture"]).status.code(), Some(1));
    assert_eq!(
        pcs(&["query", "--fixture", "--q", "Z"]).status.code(),
        Some(1)
    );
    assert_eq!(
        pcs(&["query", "--fixture", "--index", "x.cpt", "--q", "D"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        pcs(&["query", "--fixture", "--q", "D", "--algorithm", "fast"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(pcs(&["--help"]).status.code(), Some(0));
    // Data errors name the offending file.
    let o = pcs(&["query", "--index", "/nonexistent/g.cpt", "--q", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("/nonexistent/g.cpt"));
}

#[test]
fn index_builds_are_deterministic_and_answer_queries() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.cpt"), dir.path().join("b.cpt"));
    assert!(pcs(&["build-index", "--fixture", "--out", p(&a)])
        .status
        .success());
    assert!(pcs(&["build-index", "--fixture", "--out", p(&b)])
        .status
        .success());
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let direct = stdout(&pcs(&[
        "query",
        "--fixture",
        "--q",
        "3",
        "--k",
        "2",
        "--format",
        "structured",
    ]));
    let indexed = stdout(&pcs(&[
        "query",
        "--index",
        p(&a),
        "--q",
        "3",
        "--k",
        "2",
        "--format",
        "structured",
    ]));
    assert_eq!(direct, indexed);

    let mut bytes = fs::read(&a).unwrap();
    let last = bytes.len() - 1;
    bytes[last] ^= 1;
    fs::write(&a, bytes).unwrap();
    assert_eq!(
        pcs(&["query", "--index", p(&a), "--q", "3"]).status.code(),
        Some(2)
    );
}

#[test]
fn all_algorithms_print_the_same_communities() {
    let first = |a: &str| {
        let o = pcs(&[
            "query",
            "--fixture",
            "--q",
            "E",
            "--k",
            "1",
            "--algorithm",
            a,
        ]);
        assert!(o.status.success(), "{a}: {}", stderr(&o));
        stdout(&o)
            .lines()
            .filter(|l| !l.starts_with("counters") && !l.starts_with("query "))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let oracle = first("oracle");
    for a in ["basic", "incre", "adv-i", "adv-d", "adv-p"] {
        assert_eq!(first(a), oracle, "{a}");
    }
}

#[test]
fn generated_graphs_load_with_the_requested_shape() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "gen", "--n", "2000", "--m", "10000", "--labels", "200", "--tokens", "5", "--seed", "4",
    ];
    let o = pcs(&[&args[..], &["--out", p(dir.path())]].concat());
    assert!(o.status.success(), "{}", stderr(&o));
    let d = dir.path();
    let g = ProfiledGraph::load_files(
        d.join("graph.edges"),
        d.join("graph.ptrees"),
        d.join("graph.gptree"),
    )
    .unwrap();
    assert_eq!(g.num_vertices(), 2000);
    let avg_degree = 2.0 * g.num_edges() as f64 / 2000.0;
    assert!((avg_degree - 10.0).abs() <= 0.5, "{avg_degree}");
    assert!(g.gptree().len() == 200 && g.gptree().max_depth() <= 5);

    // Same seed, same files.
    let again = tempfile::tempdir().unwrap();
    assert!(pcs(&[&args[..], &["--out", p(again.path())]].concat())
        .status
        .success());
    for f in ["graph.edges", "graph.ptrees", "graph.gptree"] {
        assert_eq!(
            fs::read(d.join(f)).unwrap(),
            fs::read(again.path().join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn metrics_of_a_stored_result() {
    let dir = tempfile::tempdir().unwrap();
    let result = dir.path().join("r.json");
    assert!(pcs(&[
        "query",
        "--fixture",
        "--q",
        "D",
        "--k",
        "2",
        "--out",
        p(&result)
    ])
    .status
    .success());
    let o = pcs(&[
        "metrics",
        "--fixture",
        "--result",
        p(&result),
        "--other",
        p(&result),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("ldr=1.000000"), "{out}");
    assert!(out.contains("f1=nan"));

    let truth = dir.path().join("truth");
    fs::write(&truth, "1 2 3\n0 3 4\n").unwrap();
    let out = stdout(&pcs(&[
        "metrics",
        "--fixture",
        "--result",
        p(&result),
        "--truth",
        p(&truth),
    ]));
    assert!(out.contains("f1=1.000000"), "{out}");

    fs::write(&truth, "1 2 3\n0 x 4\n").unwrap();
    let o = pcs(&[
        "metrics",
        "--fixture",
        "--result",
        p(&result),
        "--truth",
        p(&truth),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(":2:"), "{}", stderr(&o));
}

#[test]
fn bench_counts_are_reproducible() {
    let run = || {
        let o = pcs(&[
            "bench",
            "--fixture",
            "--queries",
            "3",
            "--sweeps",
            "k,vertices",
            "--ks",
            "1,2",
            "--fractions",
            "0.5,1",
            "--format",
            "structured",
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        let mut rows: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        for row in rows.as_array_mut().unwrap() {
            let row = row.as_object_mut().unwrap();
            row.remove("build_ms");
            row.remove("query_ms");
        }
        rows
    };
    let rows = run();
    assert_eq!(rows.as_array().unwrap().len(), 4 * 3);
    assert_eq!(rows, run());
}
