use super::modularity::{local_moving, ModularityState};
use super::{check_graph, compact, AlgoConfig};
use crate::error::Result;
use crate::graph::{Clustering, Graph, WeightedGraph};
use crate::seed::{self, Rng};

/// One smart-local-moving pass over `graph` starting from `assignment`
/// (community ids in `0..n`).
///
/// After ordinary local moving, every community is re-clustered from
/// singletons on its own induced subgraph (node strengths and total weight
/// stay those of `graph`, so gains are global modularity gains). The
/// resulting sub-communities become the nodes of a reduced graph whose initial
/// partition groups them by their parent community, and the procedure
/// recurses on it.
fn slm_pass(graph: &WeightedGraph, assignment: &mut Vec<usize>, resolution: f64, rng: &mut Rng) {
    let n = graph.node_count();
    if n <= 1 {
        return;
    }
    let mut state = ModularityState::new(graph, std::mem::take(assignment));
    local_moving(graph, &mut state, resolution, rng);
    let mut clusters = state.assignment;
    let k = compact(&mut clusters);
    if k == n {
        *assignment = clusters;
        return;
    }

    let mut members: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (u, &c) in clusters.iter().enumerate() {
        members[c].push(u);
    }
    let mut refined = vec![0; n];
    let mut parent = Vec::new();
    for (c, nodes) in members.iter().enumerate() {
        let sub = graph.induced_keep_strength(nodes);
        let mut sub_state = ModularityState::new(&sub, (0..nodes.len()).collect());
        local_moving(&sub, &mut sub_state, resolution, rng);
        let mut sub_clusters = sub_state.assignment;
        let sub_k = compact(&mut sub_clusters);
        let offset = parent.len();
        for (i, &u) in nodes.iter().enumerate() {
            refined[u] = offset + sub_clusters[i];
        }
        parent.extend(std::iter::repeat_n(c, sub_k));
    }

    let reduced = graph.aggregate(&refined, parent.len());
    let mut reduced_assignment = parent;
    if reduced.node_count() < n {
        slm_pass(&reduced, &mut reduced_assignment, resolution, rng);
    }
    *assignment = refined.iter().map(|&r| reduced_assignment[r]).collect();
}

/// Best of `slm_random_starts` runs, each of `slm_iterations_per_start`
/// passes starting from the previous pass's partition.
pub fn smart_local_moving(graph: &Graph, config: &AlgoConfig) -> Result<Clustering> {
    check_graph(graph)?;
    config.validate()?;
    let base = WeightedGraph::from_graph(graph);
    let mut best: Option<(f64, Vec<usize>)> = None;
    for start in 0..config.slm_random_starts {
        let mut rng = seed::rng(seed::derive(config.seed, &[start as u64]));
        let mut assignment: Vec<usize> = (0..base.node_count()).collect();
        for _ in 0..config.slm_iterations_per_start {
            slm_pass(&base, &mut assignment, config.resolution, &mut rng);
            compact(&mut assignment);
        }
        let q = base.modularity(&assignment, config.resolution);
        if best.as_ref().is_none_or(|(bq, _)| q > *bq) {
            best = Some((q, assignment));
        }
    }
    let (_, assignment) = best.expect("at least one start");
    Ok(Clustering::from_labels(&assignment))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit::*;

    fn two_k5_bridge() -> Graph {
        let mut edges = Vec::new();
        for base in [0, 5] {
            for i in 0..5 {
                for j in i + 1..5 {
                    edges.push((base + i, base + j));
                }
            }
        }
        edges.push((4, 5));
        Graph::from_edges(10, &edges).unwrap()
    }

    #[test]
    fn two_triangles_split() {
        let c = smart_local_moving(&two_triangles(), &AlgoConfig::with_seed(1)).unwrap();
        assert_eq!(c.assignment(), &[0, 0, 0, 1, 1, 1]);
    }

    #[test]
    fn splits_merged_cliques() {
        let graph = two_k5_bridge();
        let base = WeightedGraph::from_graph(&graph);
        let merged = vec![0; 10];
        let split: Vec<usize> = (0..10).map(|v| v / 5).collect();
        let q_merged = naive_modularity(&graph, &merged);
        let q_split = naive_modularity(&graph, &split);
        assert!(q_split > q_merged);
        // start from the merged configuration: the subgraph re-run must split it
        let mut assignment = merged;
        slm_pass(&base, &mut assignment, 1.0, &mut seed::rng(5));
        let c = Clustering::from_labels(&assignment);
        assert_eq!(c.assignment(), Clustering::from_labels(&split).assignment());
    }
}
