//! Modularity local moving shared by Louvain and smart local moving.

use rand::seq::SliceRandom;

use super::MIN_IMPROVEMENT;
use crate::graph::WeightedGraph;
use crate::seed::Rng;

/// `w_in/m − γ·strength·vol/(2m²)`: the modularity change of moving an
/// isolated node of the given strength into a community of volume `vol` to
/// which it has `w_in` edge weight.
pub fn modularity_gain(
    w_in: f64,
    node_strength: f64,
    target_volume: f64,
    total_weight: f64,
    resolution: f64,
) -> f64 {
    let m = total_weight;
    w_in / m - resolution * node_strength * target_volume / (2.0 * m * m)
}

/// Community assignment of a weighted graph together with per-community
/// volumes.
#[derive(Clone, Debug)]
pub struct ModularityState {
    pub assignment: Vec<usize>,
    pub volume: Vec<f64>,
}

impl ModularityState {
    /// Community ids must lie in `0..graph.node_count()`.
    pub fn new(graph: &WeightedGraph, assignment: Vec<usize>) -> Self {
        let mut volume = vec![0.0; graph.node_count()];
        for (u, &c) in assignment.iter().enumerate() {
            volume[c] += graph.strength(u);
        }
        ModularityState { assignment, volume }
    }

    /// Gain of moving `node` into `target`, with the node's own contribution
    /// removed from its current community first.
    pub fn gain(&self, graph: &WeightedGraph, node: usize, target: usize, resolution: f64) -> f64 {
        let w_in: f64 = graph
            .neighbors(node)
            .iter()
            .filter(|&&(v, _)| self.assignment[v] == target)
            .map(|&(_, w)| w)
            .sum();
        let mut vol = self.volume[target];
        if self.assignment[node] == target {
            vol -= graph.strength(node);
        }
        modularity_gain(
            w_in,
            graph.strength(node),
            vol,
            graph.total_weight(),
            resolution,
        )
    }
}

/// Repeated passes in fresh random order, moving each node to the neighboring
/// community (or an empty one) with the largest gain, until a full pass makes
/// no move. Ties go to the lowest community id. Returns whether any node
/// moved.
pub(crate) fn local_moving(
    graph: &WeightedGraph,
    state: &mut ModularityState,
    resolution: f64,
    rng: &mut Rng,
) -> bool {
    let n = graph.node_count();
    let mut order: Vec<usize> = (0..n).collect();
    let mut weight_to = vec![0.0; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut moved_any = false;
    let mut size = vec![0usize; n];
    for &c in &state.assignment {
        size[c] += 1;
    }
    let mut empty: Vec<usize> = (0..n).rev().filter(|&c| size[c] == 0).collect();

    loop {
        order.shuffle(rng);
        let mut moved = false;
        for &u in &order {
            let own = state.assignment[u];
            let strength = graph.strength(u);
            for &(v, w) in graph.neighbors(u) {
                let c = state.assignment[v];
                if weight_to[c] == 0.0 {
                    touched.push(c);
                }
                weight_to[c] += w;
            }
            state.volume[own] -= strength;

            let m = graph.total_weight();
            let own_gain =
                modularity_gain(weight_to[own], strength, state.volume[own], m, resolution);
            let mut best = own;
            let mut best_gain = own_gain;
            for &c in &touched {
                if c == own {
                    continue;
                }
                let g = modularity_gain(weight_to[c], strength, state.volume[c], m, resolution);
                if g > best_gain || (g == best_gain && c < best && best != own) {
                    best = c;
                    best_gain = g;
                }
            }
            if size[own] > 1 {
                if let Some(&c) = empty.last() {
                    if 0.0 > best_gain || (0.0 == best_gain && c < best && best != own) {
                        best = c;
                        best_gain = 0.0;
                    }
                }
            }
            if best != own && best_gain > own_gain + MIN_IMPROVEMENT {
                state.assignment[u] = best;
                size[own] -= 1;
                if size[own] == 0 {
                    empty.push(own);
                }
                if size[best] == 0 {
                    let pos = empty
                        .iter()
                        .rposition(|&c| c == best)
                        .expect("empty community");
                    empty.swap_remove(pos);
                }
                size[best] += 1;
                moved = true;
            } else {
                best = own;
            }
            state.volume[best] += strength;

            for &c in &touched {
                weight_to[c] = 0.0;
            }
            touched.clear();
        }
        if !moved {
            break;
        }
        moved_any = true;
    }
    moved_any
}
