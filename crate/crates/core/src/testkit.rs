//! Small fixtures and brute-force oracles shared by unit tests.

use crate::graph::Graph;

pub fn two_triangles() -> Graph {
    Graph::from_edges(6, &[(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)]).unwrap()
}

pub fn barbell() -> Graph {
    Graph::from_edges(6, &[(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)]).unwrap()
}

pub fn k4() -> Graph {
    Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
}

/// Every set partition of `0..n` as a restricted growth string.
pub fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        let next = prefix.iter().copied().max().map_or(0, |m| m + 1);
        for c in 0..=next {
            prefix.push(c);
            rec(prefix, n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), n, &mut out);
    out
}

/// `1/2m Σ_ij [A_ij − k_i k_j / 2m] δ(c_i, c_j)` over all ordered node pairs.
pub fn naive_modularity(graph: &Graph, labels: &[usize]) -> f64 {
    let n = graph.node_count();
    let two_m = 2.0 * graph.edge_count() as f64;
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if labels[i] != labels[j] {
                continue;
            }
            let a = if graph.has_edge(i, j) { 1.0 } else { 0.0 };
            q += a - graph.degree(i) as f64 * graph.degree(j) as f64 / two_m;
        }
    }
    q / two_m
}
