use super::modularity::{local_moving, ModularityState};
use super::{check_graph, compact, AlgoConfig};
use crate::error::Result;
use crate::graph::{Clustering, Graph, WeightedGraph};
use crate::seed::{self, Rng};

/// One Louvain descent from singletons: local moving, then collapse the
/// communities into super-nodes, until a level makes no move. Returns the
/// partition of the base nodes.
pub(crate) fn louvain_descent(base: &WeightedGraph, resolution: f64, rng: &mut Rng) -> Vec<usize> {
    let mut graph = base.clone();
    let mut membership: Vec<usize> = (0..base.node_count()).collect();
    loop {
        let mut state = ModularityState::new(&graph, (0..graph.node_count()).collect());
        if !local_moving(&graph, &mut state, resolution, rng) {
            break;
        }
        let mut level = state.assignment;
        let k = compact(&mut level);
        for c in membership.iter_mut() {
            *c = level[*c];
        }
        if k == graph.node_count() {
            break;
        }
        graph = graph.aggregate(&level, k);
    }
    membership
}

/// Best of `louvain_restarts` independent descents by modularity at the
/// configured resolution.
pub fn louvain(graph: &Graph, config: &AlgoConfig) -> Result<Clustering> {
    check_graph(graph)?;
    config.validate()?;
    let base = WeightedGraph::from_graph(graph);
    let mut best: Option<(f64, Vec<usize>)> = None;
    for restart in 0..config.louvain_restarts {
        let mut rng = seed::rng(seed::derive(config.seed, &[restart as u64]));
        let membership = louvain_descent(&base, config.resolution, &mut rng);
        let q = base.modularity(&membership, config.resolution);
        if best.as_ref().is_none_or(|(bq, _)| q > *bq) {
            best = Some((q, membership));
        }
    }
    let (_, membership) = best.expect("at least one restart");
    Ok(Clustering::from_labels(&membership))
}
