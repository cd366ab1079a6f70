//! Shared test corpus and brute-force oracles. The oracles work directly
//! from edges and per-node labels and share no code with the library's fast
//! paths.

#![allow(dead_code)]

use std::collections::HashMap;

use clustbench::lfr::{self, LfrParams};
use clustbench::{algorithms, AlgoConfig, Algorithm, Clustering, Graph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct CorpusGraph {
    pub name: String,
    pub graph: Graph,
    pub truth: Option<Clustering>,
}

fn fixed(name: &str, n: usize, edges: &[(usize, usize)]) -> CorpusGraph {
    CorpusGraph {
        name: name.to_string(),
        graph: Graph::from_edges(n, edges).unwrap(),
        truth: None,
    }
}

pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

/// Equal-size groups with intra/inter edge probabilities.
pub fn planted(n: usize, groups: usize, p_in: f64, p_out: f64, seed: u64) -> (Graph, Clustering) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let label: Vec<usize> = (0..n).map(|v| v * groups / n).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let p = if label[u] == label[v] { p_in } else { p_out };
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    (
        Graph::from_edges(n, &edges).unwrap(),
        Clustering::from_labels(&label),
    )
}

pub fn is_connected(graph: &Graph) -> bool {
    graph.components().0 == 1
}

/// Small fixed graphs, planted-partition graphs and small LFR graphs.
/// Random small graphs are kept out on purpose; see `random_small_graphs`.
pub fn corpus() -> Vec<CorpusGraph> {
    let mut out = vec![
        fixed(
            "two-triangles",
            6,
            &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)],
        ),
        fixed(
            "barbell",
            6,
            &[(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)],
        ),
        fixed("k4", 4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
        fixed("path5", 5, &[(0, 1), (1, 2), (2, 3), (3, 4)]),
        fixed("star6", 6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]),
        fixed(
            "cycle7",
            7,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 0)],
        ),
        fixed(
            "bowtie",
            5,
            &[(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)],
        ),
        fixed(
            "two-k4-bridge",
            8,
            &[
                (0, 1),
                (0, 2),
                (0, 3),
                (1, 2),
                (1, 3),
                (2, 3),
                (4, 5),
                (4, 6),
                (4, 7),
                (5, 6),
                (5, 7),
                (6, 7),
                (3, 4),
            ],
        ),
        // Three clusters with intra edges 3, 5, 1 and volumes 7, 13, 4.
        fixed(
            "three-clusters",
            10,
            &[
                (0, 1),
                (1, 2),
                (0, 2),
                (3, 4),
                (4, 5),
                (5, 6),
                (3, 6),
                (3, 5),
                (7, 8),
                (2, 3),
                (6, 7),
                (6, 9),
            ],
        ),
    ];
    out.last_mut().unwrap().truth = Some(Clustering::from_labels(&[0, 0, 0, 1, 1, 1, 1, 2, 2, 2]));
    for (i, (n, groups)) in [(40usize, 4usize), (90, 3), (150, 5), (200, 8)]
        .into_iter()
        .enumerate()
    {
        let (graph, truth) = planted(n, groups, 0.5, 0.02, 200 + i as u64);
        out.push(CorpusGraph {
            name: format!("planted{n}"),
            graph,
            truth: Some(truth),
        });
    }
    for (i, mu) in [0.2, 0.5].into_iter().enumerate() {
        let params = LfrParams {
            n: 200,
            k_avg: 10.0,
            k_max: 20,
            mu,
            tau1: 2.0,
            tau2: 1.0,
            c_min: 20,
            c_max: 40,
            seed: 300 + i as u64,
        };
        let gold = lfr::generate(&params).unwrap();
        out.push(CorpusGraph {
            name: format!("lfr200-mu{mu}"),
            graph: gold.graph,
            truth: Some(gold.truth),
        });
    }
    out
}

/// Seeded G(n, 1/2) graphs on 6 to 8 nodes with at least one edge.
pub fn random_small_graphs(count: u64) -> Vec<Graph> {
    let mut out = Vec::new();
    for s in 0..count {
        for n in [6usize, 7, 8] {
            let g = erdos_renyi(n, 0.5, 1000 + s * 10 + n as u64);
            if g.edge_count() > 0 {
                out.push(g);
            }
        }
    }
    out
}

/// Partitions scored on each corpus graph: the truth (if any), the output
/// of every algorithm, trivial partitions and seeded random ones.
pub fn corpus_partitions(entry: &CorpusGraph) -> Vec<(String, Clustering)> {
    let n = entry.graph.node_count();
    let mut out = Vec::new();
    if let Some(t) = &entry.truth {
        out.push(("truth".to_string(), t.clone()));
    }
    for a in Algorithm::ALL {
        let run = algorithms::run(a, &entry.graph, &AlgoConfig::with_seed(5)).unwrap();
        out.push((a.token().to_string(), run.clustering));
    }
    out.push(("singletons".into(), Clustering::singletons(n)));
    out.push(("whole".into(), Clustering::single_community(n)));
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
    for k in [2usize, 3, 5] {
        let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
        out.push((format!("random{k}"), Clustering::from_labels(&labels)));
    }
    out
}

/// Restricted growth strings: every partition of `0..n` exactly once.
pub fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for c in 0..=max + 1 {
            prefix.push(c);
            rec(prefix, max.max(c), n, out);
            prefix.pop();
        }
    }
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut prefix = vec![0];
    rec(&mut prefix, 0, n, &mut out);
    out
}

fn adjacency_matrix(graph: &Graph) -> Vec<Vec<i64>> {
    let n = graph.node_count();
    let mut a = vec![vec![0i64; n]; n];
    for (u, v) in graph.edges() {
        a[u][v] = 1;
        a[v][u] = 1;
    }
    a
}

/// `Q = 1/2m Σ_ij [A_ij − k_i k_j / 2m] δ(c_i, c_j)`, summed over all ordered
/// node pairs in exact integer arithmetic with one final division.
pub fn oracle_modularity(graph: &Graph, labels: &[usize]) -> f64 {
    let n = graph.node_count();
    let a = adjacency_matrix(graph);
    let k: Vec<i128> = a
        .iter()
        .map(|row| row.iter().sum::<i64>() as i128)
        .collect();
    let two_m: i128 = k.iter().sum();
    let mut num: i128 = 0;
    for i in 0..n {
        for j in 0..n {
            if labels[i] == labels[j] {
                num += a[i][j] as i128 * two_m - k[i] * k[j];
            }
        }
    }
    num as f64 / (two_m * two_m) as f64
}

/// Graph conductance by classifying every edge against every community.
pub fn oracle_conductance(graph: &Graph, labels: &[usize]) -> f64 {
    let communities: Vec<usize> = {
        let mut c: Vec<usize> = labels.to_vec();
        c.sort_unstable();
        c.dedup();
        c
    };
    let m = graph.edge_count();
    let mut total = 0.0;
    for &c in &communities {
        let (mut intra, mut cut) = (0usize, 0usize);
        for (u, v) in graph.edges() {
            match (labels[u] == c, labels[v] == c) {
                (true, true) => intra += 1,
                (true, false) | (false, true) => cut += 1,
                _ => {}
            }
        }
        let touching = intra + cut;
        let outside = m - intra;
        let denom = touching.min(outside);
        total += if denom == 0 {
            0.0
        } else {
            cut as f64 / denom as f64
        };
    }
    1.0 - total / communities.len() as f64
}

pub fn oracle_coverage(graph: &Graph, labels: &[usize]) -> f64 {
    let intra = graph
        .edges()
        .filter(|&(u, v)| labels[u] == labels[v])
        .count();
    intra as f64 / graph.edge_count() as f64
}

/// `(n11, n00, n10, n01)` by visiting every unordered node pair.
pub fn oracle_pair_counts(x: &[usize], y: &[usize]) -> (u64, u64, u64, u64) {
    let (mut n11, mut n00, mut n10, mut n01) = (0, 0, 0, 0);
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            match (x[i] == x[j], y[i] == y[j]) {
                (true, true) => n11 += 1,
                (false, false) => n00 += 1,
                (true, false) => n10 += 1,
                (false, true) => n01 += 1,
            }
        }
    }
    (n11, n00, n10, n01)
}

pub fn oracle_ari(x: &[usize], y: &[usize]) -> f64 {
    let (n11, n00, n10, n01) = oracle_pair_counts(x, y);
    let (n11, n00, n10, n01) = (n11 as f64, n00 as f64, n10 as f64, n01 as f64);
    let denom = (n00 + n01) * (n01 + n11) + (n00 + n10) * (n10 + n11);
    if denom == 0.0 {
        return 1.0;
    }
    2.0 * (n00 * n11 - n01 * n10) / denom
}

/// NMI from joint and marginal label frequencies, natural logarithms.
pub fn oracle_nmi(x: &[usize], y: &[usize]) -> f64 {
    let n = x.len() as f64;
    let mut cx: HashMap<usize, usize> = HashMap::new();
    let mut cy: HashMap<usize, usize> = HashMap::new();
    let mut cxy: HashMap<(usize, usize), usize> = HashMap::new();
    for i in 0..x.len() {
        *cx.entry(x[i]).or_default() += 1;
        *cy.entry(y[i]).or_default() += 1;
        *cxy.entry((x[i], y[i])).or_default() += 1;
    }
    let p = |c: usize| c as f64 / n;
    let h =
        |counts: &HashMap<usize, usize>| -counts.values().map(|&c| p(c) * p(c).ln()).sum::<f64>();
    let (hx, hy) = (h(&cx), h(&cy));
    let i: f64 = cxy
        .iter()
        .map(|(&(a, b), &c)| p(c) * (p(c) / (p(cx[&a]) * p(cy[&b]))).ln())
        .sum();
    match (cx.len() == 1, cy.len() == 1) {
        (true, true) => 1.0,
        (true, false) | (false, true) => 0.0,
        _ => i / (hx * hy).sqrt(),
    }
}

/// Map equation evaluated from its entropy form:
/// `L = q·H(Q) + Σ_i p_i↻·H(P_i)`.
pub fn oracle_map_equation(graph: &Graph, labels: &[usize]) -> f64 {
    let two_m = 2.0 * graph.edge_count() as f64;
    let k = labels.iter().max().unwrap() + 1;
    let mut exit = vec![0.0; k];
    let mut visit: Vec<Vec<f64>> = vec![Vec::new(); k];
    for v in 0..graph.node_count() {
        visit[labels[v]].push(graph.degree(v) as f64 / two_m);
        for &w in graph.neighbors(v) {
            if labels[w] != labels[v] {
                exit[labels[v]] += 1.0 / two_m;
            }
        }
    }
    let entropy = |ps: &[f64]| {
        let total: f64 = ps.iter().sum();
        if total == 0.0 {
            return 0.0;
        }
        -ps.iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| (p / total) * (p / total).log2())
            .sum::<f64>()
    };
    let q: f64 = exit.iter().sum();
    let mut l = q * entropy(&exit);
    for i in 0..k {
        if visit[i].is_empty() {
            continue;
        }
        let mut terms = vec![exit[i]];
        terms.extend(&visit[i]);
        let p_round: f64 = terms.iter().sum();
        l += p_round * entropy(&terms);
    }
    l
}

/// Best value of `score` over every partition of the graph's nodes.
pub fn exhaustive_best(n: usize, score: impl Fn(&[usize]) -> f64, maximize: bool) -> f64 {
    let mut best = if maximize {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    };
    for p in all_partitions(n) {
        let s = score(&p);
        if (maximize && s > best) || (!maximize && s < best) {
            best = s;
        }
    }
    best
}
