//! Two-level Infomap: greedy minimization of the map equation with
//! undirected flow (visit rate ∝ degree, no teleportation), searched with the
//! same local-moving-plus-aggregation scheme as Louvain.
//!
//! With `p_α = deg(α)/2m`, module exit rates `q_i = cut(i)/2m` and
//! `q = Σ q_i`, the two-level description length is
//!
//! ```text
//! L = q·H(Q) + Σ_i p_i∘·H(P_i)
//!   = plogp(q) − 2·Σ plogp(q_i) − Σ_α plogp(p_α) + Σ_i plogp(q_i + p_i)
//! ```
//!
//! in bits. [`MapEquationState`] evaluates the first form directly from the
//! entropies; the optimizer works with the expanded second form.

use rand::seq::SliceRandom;

use super::{check_graph, compact, AlgoConfig, MIN_IMPROVEMENT};
use crate::error::{Error, Result};
use crate::graph::{Clustering, Graph, WeightedGraph};
use crate::seed::{self, Rng};

fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        p * p.log2()
    } else {
        0.0
    }
}

fn entropy(probabilities: impl IntoIterator<Item = f64>) -> f64 {
    -probabilities.into_iter().map(plogp).sum::<f64>()
}

/// Map-equation terms of one partition, evaluated from scratch.
#[derive(Clone, Debug, PartialEq)]
pub struct MapEquationState {
    /// Stationary visit rate `p_α` of every node.
    pub node_visit: Vec<f64>,
    /// Exit rate `q_i` of every module.
    pub module_exit: Vec<f64>,
    /// `H(Q)` over `q_i / q`.
    pub index_entropy: f64,
    /// `H(P_i)` over the exit rate and member visit rates of module `i`.
    pub module_entropies: Vec<f64>,
    /// `p_i∘ = q_i + Σ_{α∈i} p_α`.
    pub module_codebook_use: Vec<f64>,
}

impl MapEquationState {
    pub fn new(graph: &Graph, clustering: &Clustering) -> Result<Self> {
        if graph.node_count() != clustering.node_count() {
            return Err(Error::InvalidClustering(format!(
                "clustering covers {} nodes, graph has {}",
                clustering.node_count(),
                graph.node_count()
            )));
        }
        if let Some(v) = (0..graph.node_count()).find(|&v| graph.degree(v) == 0) {
            return Err(Error::InvalidGraph(format!(
                "node {v} is isolated; its visit rate is zero"
            )));
        }
        let two_m = 2.0 * graph.edge_count() as f64;
        let node_visit: Vec<f64> = (0..graph.node_count())
            .map(|v| graph.degree(v) as f64 / two_m)
            .collect();

        let k = clustering.community_count();
        let mut cut = vec![0usize; k];
        for (u, v) in graph.edges() {
            let (cu, cv) = (clustering.community_of(u), clustering.community_of(v));
            if cu != cv {
                cut[cu] += 1;
                cut[cv] += 1;
            }
        }
        let module_exit: Vec<f64> = cut.iter().map(|&c| c as f64 / two_m).collect();
        let total_exit: f64 = module_exit.iter().sum();
        let index_entropy = if total_exit > 0.0 {
            entropy(module_exit.iter().map(|&q| q / total_exit))
        } else {
            0.0
        };

        let members = clustering.members();
        let mut module_entropies = Vec::with_capacity(k);
        let mut module_codebook_use = Vec::with_capacity(k);
        for (i, nodes) in members.iter().enumerate() {
            let total = module_exit[i] + nodes.iter().map(|&a| node_visit[a]).sum::<f64>();
            let h = entropy(
                std::iter::once(module_exit[i] / total)
                    .chain(nodes.iter().map(|&a| node_visit[a] / total)),
            );
            module_entropies.push(h);
            module_codebook_use.push(total);
        }
        Ok(MapEquationState {
            node_visit,
            module_exit,
            index_entropy,
            module_entropies,
            module_codebook_use,
        })
    }

    /// Description length in bits per step.
    pub fn codelength(&self) -> f64 {
        let q: f64 = self.module_exit.iter().sum();
        q * self.index_entropy
            + self
                .module_codebook_use
                .iter()
                .zip(&self.module_entropies)
                .map(|(p, h)| p * h)
                .sum::<f64>()
    }
}

/// Two-level map equation `L` (bits) of `clustering` on `graph`.
pub fn map_equation(graph: &Graph, clustering: &Clustering) -> Result<f64> {
    Ok(MapEquationState::new(graph, clustering)?.codelength())
}

/// Module tallies for incremental codelength updates, in edge-weight units.
struct FlowState {
    module: Vec<usize>,
    exit: Vec<f64>,
    volume: Vec<f64>,
    size: Vec<usize>,
    total_exit: f64,
    two_m: f64,
    /// `−Σ_α plogp(p_α)` over base nodes; invariant under any partition.
    node_term: f64,
}

impl FlowState {
    fn singletons(graph: &WeightedGraph, node_term: f64) -> Self {
        let n = graph.node_count();
        let exit: Vec<f64> = (0..n)
            .map(|u| graph.strength(u) - 2.0 * graph.self_weight(u))
            .collect();
        FlowState {
            module: (0..n).collect(),
            total_exit: exit.iter().sum(),
            volume: (0..n).map(|u| graph.strength(u)).collect(),
            exit,
            size: vec![1; n],
            two_m: 2.0 * graph.total_weight(),
            node_term,
        }
    }

    fn module_terms(&self, exit: f64, volume: f64) -> f64 {
        let q = exit / self.two_m;
        let p = volume / self.two_m;
        -2.0 * plogp(q) + plogp(q + p)
    }

    fn codelength(&self) -> f64 {
        let modules: f64 = self
            .exit
            .iter()
            .zip(&self.volume)
            .zip(&self.size)
            .filter(|(_, &s)| s > 0)
            .map(|((&e, &v), _)| self.module_terms(e, v))
            .sum();
        plogp(self.total_exit / self.two_m) + modules + self.node_term
    }

    /// Codelength change of moving a node with `out` weight to other nodes,
    /// `to_own` of it inside its module and `to_target` into `target`.
    fn delta(
        &self,
        own: usize,
        target: usize,
        strength: f64,
        out: f64,
        to_own: f64,
        to_target: f64,
    ) -> f64 {
        let exit_own = self.exit[own] - (out - to_own) + to_own;
        let exit_target = self.exit[target] + (out - to_target) - to_target;
        let total = self.total_exit - self.exit[own] - self.exit[target] + exit_own + exit_target;
        let before = self.module_terms(self.exit[own], self.volume[own])
            + self.module_terms(self.exit[target], self.volume[target]);
        let after = self.module_terms(exit_own, self.volume[own] - strength)
            + self.module_terms(exit_target, self.volume[target] + strength);
        plogp(total / self.two_m) - plogp(self.total_exit / self.two_m) + after - before
    }

    fn apply(
        &mut self,
        u: usize,
        target: usize,
        strength: f64,
        out: f64,
        to_own: f64,
        to_target: f64,
    ) {
        let own = self.module[u];
        let exit_own = self.exit[own] - (out - to_own) + to_own;
        let exit_target = self.exit[target] + (out - to_target) - to_target;
        self.total_exit += exit_own + exit_target - self.exit[own] - self.exit[target];
        self.exit[own] = exit_own;
        self.exit[target] = exit_target;
        self.volume[own] -= strength;
        self.volume[target] += strength;
        self.size[own] -= 1;
        self.size[target] += 1;
        self.module[u] = target;
    }
}

/// Local moving under the map equation. Returns whether any node moved.
fn local_moving(
    graph: &WeightedGraph,
    state: &mut FlowState,
    rng: &mut Rng,
    codelength: &mut f64,
    observer: &mut dyn FnMut(f64),
) -> bool {
    let n = graph.node_count();
    let mut order: Vec<usize> = (0..n).collect();
    let mut weight_to = vec![0.0; n];
    let mut touched = Vec::new();
    let mut empty: Vec<usize> = Vec::new();
    let mut moved_any = false;

    loop {
        order.shuffle(rng);
        let mut moved = false;
        for &u in &order {
            let own = state.module[u];
            for &(v, w) in graph.neighbors(u) {
                let c = state.module[v];
                if weight_to[c] == 0.0 {
                    touched.push(c);
                }
                weight_to[c] += w;
            }
            let strength = graph.strength(u);
            let out = strength - 2.0 * graph.self_weight(u);
            let to_own = weight_to[own];

            let mut best = own;
            let mut best_delta = 0.0;
            let consider = |c: usize, to_c: f64, best: &mut usize, best_delta: &mut f64| {
                let d = state.delta(own, c, strength, out, to_own, to_c);
                if d < *best_delta || (d == *best_delta && *best != own && c < *best) {
                    *best = c;
                    *best_delta = d;
                }
            };
            for &c in &touched {
                if c != own {
                    consider(c, weight_to[c], &mut best, &mut best_delta);
                }
            }
            if state.size[own] > 1 {
                if let Some(&c) = empty.last() {
                    consider(c, 0.0, &mut best, &mut best_delta);
                }
            }

            if best != own && best_delta < -MIN_IMPROVEMENT {
                let to_target = weight_to[best];
                if state.size[best] == 0 {
                    let pos = empty
                        .iter()
                        .rposition(|&c| c == best)
                        .expect("empty module");
                    empty.swap_remove(pos);
                }
                state.apply(u, best, strength, out, to_own, to_target);
                if state.size[own] == 0 {
                    empty.push(own);
                }
                *codelength += best_delta;
                observer(*codelength);
                moved = true;
            }

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

fn infomap_descent(
    base: &WeightedGraph,
    node_term: f64,
    rng: &mut Rng,
    observer: &mut dyn FnMut(f64),
) -> Vec<usize> {
    let mut graph = base.clone();
    let mut membership: Vec<usize> = (0..base.node_count()).collect();
    let mut codelength = FlowState::singletons(&graph, node_term).codelength();
    observer(codelength);
    loop {
        let mut state = FlowState::singletons(&graph, node_term);
        if !local_moving(&graph, &mut state, rng, &mut codelength, observer) {
            break;
        }
        let mut level = state.module;
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

fn infomap_connected(
    graph: &Graph,
    config: &AlgoConfig,
    component: u64,
    observer: &mut dyn FnMut(f64),
) -> Vec<usize> {
    let base = WeightedGraph::from_graph(graph);
    let two_m = 2.0 * graph.edge_count() as f64;
    let node_term = -(0..graph.node_count())
        .map(|v| plogp(graph.degree(v) as f64 / two_m))
        .sum::<f64>();

    let mut best: Option<(f64, Vec<usize>)> = None;
    for restart in 0..config.infomap_outer_loops {
        let mut rng = seed::rng(seed::derive(config.seed, &[restart as u64, component]));
        let membership = infomap_descent(&base, node_term, &mut rng, observer);
        let clustering = Clustering::from_labels(&membership);
        let l =
            map_equation(graph, &clustering).expect("connected component without isolated nodes");
        if best.as_ref().is_none_or(|(bl, _)| l < *bl) {
            best = Some((l, clustering.assignment().to_vec()));
        }
    }
    best.expect("at least one outer loop").1
}

/// Best of `infomap_outer_loops` descents by codelength. A disconnected graph
/// is clustered one component at a time, with community ids offset so that
/// no community spans two components; isolated nodes become singletons.
pub fn infomap(graph: &Graph, config: &AlgoConfig) -> Result<Clustering> {
    infomap_with_observer(graph, config, &mut |_| {})
}

/// [`infomap`] reporting the running codelength: once at the start of each
/// descent and after every accepted move.
pub fn infomap_with_observer(
    graph: &Graph,
    config: &AlgoConfig,
    observer: &mut dyn FnMut(f64),
) -> Result<Clustering> {
    check_graph(graph)?;
    config.validate()?;
    let (count, component) = graph.components();
    if count == 1 {
        let membership = infomap_connected(graph, config, 0, observer);
        return Ok(Clustering::from_labels(&membership));
    }

    let mut members: Vec<Vec<usize>> = vec![Vec::new(); count];
    for (v, &c) in component.iter().enumerate() {
        members[c].push(v);
    }
    let mut labels = vec![0; graph.node_count()];
    let mut offset = 0;
    for (c, nodes) in members.iter().enumerate() {
        if nodes.len() == 1 {
            labels[nodes[0]] = offset;
            offset += 1;
            continue;
        }
        let sub = graph.induced_subgraph(nodes);
        let membership = infomap_connected(&sub, config, c as u64, observer);
        let k = membership.iter().max().map_or(0, |m| m + 1);
        for (i, &v) in nodes.iter().enumerate() {
            labels[v] = offset + membership[i];
        }
        offset += k;
    }
    Ok(Clustering::from_labels(&labels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit::*;

    #[test]
    fn k4_single_module() {
        let l = map_equation(&k4(), &Clustering::single_community(4)).unwrap();
        assert!((l - 2.0).abs() < 1e-12);
    }

    #[test]
    fn two_triangles_codelengths() {
        let g = two_triangles();
        let split = Clustering::from_labels(&[0, 0, 0, 1, 1, 1]);
        let state = MapEquationState::new(&g, &split).unwrap();
        assert_eq!(state.module_exit, vec![0.0, 0.0]);
        let l = state.codelength();
        assert!((l - 3f64.log2()).abs() < 1e-12);
        let merged = map_equation(&g, &Clustering::single_community(6)).unwrap();
        assert!((merged - 6f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn isolated_nodes_rejected() {
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert!(map_equation(&g, &Clustering::single_community(3)).is_err());
    }

    #[test]
    fn expanded_form_matches_entropy_form() {
        let g = barbell();
        for labels in all_partitions(6) {
            let c = Clustering::from_labels(&labels);
            let direct = map_equation(&g, &c).unwrap();
            let base = WeightedGraph::from_graph(&g);
            let agg = base.aggregate(c.assignment(), c.community_count());
            let two_m = 14.0;
            let node_term = -(0..6)
                .map(|v| plogp(g.degree(v) as f64 / two_m))
                .sum::<f64>();
            let mut state = FlowState::singletons(&agg, node_term);
            // aggregated singletons carry their internal edges as self weight
            state.two_m = two_m;
            assert!((state.codelength() - direct).abs() < 1e-12, "{labels:?}");
        }
    }

    #[test]
    fn moves_strictly_decrease_codelength() {
        let g = barbell();
        let mut trace = Vec::new();
        let c =
            infomap_with_observer(&g, &AlgoConfig::with_seed(2), &mut |l| trace.push(l)).unwrap();
        assert_eq!(c.assignment(), &[0, 0, 0, 1, 1, 1]);
        // each descent starts from singletons and strictly decreases
        let singleton = map_equation(&g, &Clustering::singletons(6)).unwrap();
        let mut prev = f64::INFINITY;
        for &l in &trace {
            if (l - singleton).abs() < 1e-12 {
                prev = l;
                continue;
            }
            assert!(l < prev, "{l} !< {prev}");
            prev = l;
        }
        let final_l = map_equation(&g, &c).unwrap();
        assert!(trace.iter().any(|&l| (l - final_l).abs() < 1e-9));
    }

    #[test]
    fn disconnected_graph_clustered_per_component() {
        let c = infomap(&two_triangles(), &AlgoConfig::with_seed(0)).unwrap();
        assert_eq!(c.assignment(), &[0, 0, 0, 1, 1, 1]);
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let c = infomap(&g, &AlgoConfig::with_seed(0)).unwrap();
        assert_eq!(c.assignment(), &[0, 0, 0, 1, 2]);
    }
}
