//! End-to-end runs of the clustbench binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn clustbench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clustbench"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = clustbench(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn generate_cluster_evaluate() {
    let dir = tempfile::tempdir().unwrap();
    let (graph, truth, found) = (
        dir.path().join("g.edges"),
        dir.path().join("g.truth"),
        dir.path().join("g.clu"),
    );
    let stats = json(&ok(&[
        "generate",
        "--N",
        "1000",
        "--mu",
        "0.3",
        "--seed",
        "4",
        "--graph",
        p(&graph),
        "--communities",
        p(&truth),
    ]));
    assert_eq!(stats["nodes"], 1000);
    assert!((stats["empirical_mu"].as_f64().unwrap() - 0.3).abs() <= 0.02);

    ok(&[
        "cluster",
        "--algorithm",
        "slm",
        "--graph",
        p(&graph),
        "--out",
        p(&found),
        "--seed",
        "1",
    ]);
    assert_eq!(fs::read_to_string(&found).unwrap().lines().count(), 1000);

    let scores = json(&ok(&[
        "evaluate",
        "--graph",
        p(&graph),
        "--clustering",
        p(&found),
        "--truth",
        p(&truth),
    ]));
    assert!(scores["nmi"].as_f64().unwrap() > 0.95, "{scores}");
    assert!(scores["coverage"].as_f64().unwrap() > 0.6);

    let quality_only = json(&ok(&[
        "evaluate",
        "--graph",
        p(&graph),
        "--clustering",
        p(&found),
    ]));
    assert!(quality_only.get("nmi").is_none());
    assert_eq!(quality_only["modularity"], scores["modularity"]);
}

#[test]
fn cluster_requires_canonical_ids() {
    let dir = tempfile::tempdir().unwrap();
    let raw = dir.path().join("raw.txt");
    fs::write(
        &raw,
        "# two triangles\n10 20\n20 30\n10 30\n40 50\n50 60\n40 60\n30 40\n",
    )
    .unwrap();
    let out = clustbench(&["cluster", "--algorithm", "louvain", "--graph", p(&raw)]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("ingest"));

    let graph = dir.path().join("g.edges");
    ok(&["ingest", p(&raw), p(&graph)]);
    let text = ok(&["cluster", "--algorithm", "louvain", "--graph", p(&graph)]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6);
    let community = |i: usize| lines[i].split('\t').nth(1).unwrap().to_string();
    assert_eq!(lines[0].split('\t').next(), Some("1"));
    assert_eq!(community(0), community(2));
    assert_ne!(community(0), community(3));
}

#[test]
fn ingest_compacts_ids() {
    let dir = tempfile::tempdir().unwrap();
    let (input, output, map) = (
        dir.path().join("in"),
        dir.path().join("out"),
        dir.path().join("map"),
    );
    fs::write(&input, "# snap\n5 9\n9 5\n9 12\n12 12\n").unwrap();
    let out = clustbench(&["ingest", p(&input), p(&output), "--map", p(&map)]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("3 nodes, 2 edges"));
    assert_eq!(fs::read_to_string(&output).unwrap(), "1\t2\n2\t3\n");
    assert_eq!(fs::read_to_string(&map).unwrap(), "1\t5\n2\t9\n3\t12\n");
}

#[test]
fn experiment_and_score_write_results() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("results");
    let config = dir.path().join("exp.toml");
    fs::write(
        &config,
        format!(
            "sizes = [600]\nmus = [0.3]\nrealizations = 1\nalgorithms = [\"lp\", \"slm\"]\noutput_dir = {:?}\n\n[algo]\nslm_random_starts = 2\n",
            p(&out_dir)
        ),
    )
    .unwrap();
    ok(&["experiment", p(&config), "--sequential"]);
    let runs = fs::read_to_string(out_dir.join("runs.csv")).unwrap();
    assert_eq!(runs.lines().count(), 3);
    assert!(runs
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("lfr-n600-mu0.3-r0,lp,"));
    assert!(out_dir.join("summary.json").exists());

    let graph = dir.path().join("tiny.edges");
    fs::write(&graph, "1 2\n2 3\n1 3\n3 4\n4 5\n5 6\n4 6\n").unwrap();
    let score_dir = dir.path().join("score");
    ok(&[
        "score",
        p(&graph),
        "--algorithms",
        "louvain,lp",
        "--output-dir",
        p(&score_dir),
    ]);
    let runs = fs::read_to_string(score_dir.join("runs.csv")).unwrap();
    let row = runs.lines().nth(1).unwrap();
    assert!(row.starts_with("tiny.edges,louvain,"), "{row}");
    assert!(row.ends_with(",,,"), "{row}");
}

#[test]
fn errors_exit_nonzero_with_message() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.edges");
    let out = clustbench(&["cluster", "--algorithm", "slm", "--graph", p(&missing)]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.starts_with("error:") && err.contains("missing.edges"),
        "{err}"
    );

    let bad = dir.path().join("bad.edges");
    fs::write(&bad, "1 2\n2 x\n").unwrap();
    let out = clustbench(&["cluster", "--algorithm", "slm", "--graph", p(&bad)]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let out = clustbench(&["cluster", "--algorithm", "spectral", "--graph", p(&bad)]);
    assert!(!out.status.success());
}
