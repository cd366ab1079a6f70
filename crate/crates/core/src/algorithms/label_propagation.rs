use rand::seq::{IndexedRandom, SliceRandom};

use super::{check_graph, AlgoConfig};
use crate::error::Result;
use crate::graph::{Clustering, Graph};
use crate::seed;

#[derive(Clone, Debug, PartialEq)]
pub struct LabelPropagationRun {
    pub clustering: Clustering,
    /// Every node's label was among its neighbors' most frequent labels when
    /// the run stopped.
    pub converged: bool,
    pub rounds: usize,
}

/// Scratch space for counting neighbor labels.
struct LabelCounter {
    count: Vec<usize>,
    touched: Vec<usize>,
    best: Vec<usize>,
}

impl LabelCounter {
    fn new(n: usize) -> Self {
        LabelCounter {
            count: vec![0; n],
            touched: Vec::new(),
            best: Vec::new(),
        }
    }

    /// Fills `self.best` with the most frequent neighbor labels, ascending.
    fn tally(&mut self, graph: &Graph, labels: &[usize], node: usize) {
        let mut top = 0;
        for &v in graph.neighbors(node) {
            let l = labels[v];
            if self.count[l] == 0 {
                self.touched.push(l);
            }
            self.count[l] += 1;
            top = top.max(self.count[l]);
        }
        self.best.clear();
        for &l in &self.touched {
            if self.count[l] == top {
                self.best.push(l);
            }
        }
        self.best.sort_unstable();
        for &l in &self.touched {
            self.count[l] = 0;
        }
        self.touched.clear();
    }
}

/// Asynchronous label propagation. Each round visits nodes in a fresh random
/// order; a node keeps its label if it is among the most frequent labels of
/// its neighbors and otherwise adopts one of those labels uniformly at
/// random. Stops once every node holds a maximal label, or after
/// `lp_max_rounds` rounds.
pub fn label_propagation(graph: &Graph, config: &AlgoConfig) -> Result<LabelPropagationRun> {
    check_graph(graph)?;
    config.validate()?;
    let n = graph.node_count();
    let mut rng = seed::rng(config.seed);
    let mut labels: Vec<usize> = (0..n).collect();
    let mut order: Vec<usize> = (0..n).collect();
    let mut counter = LabelCounter::new(n);

    let mut converged = false;
    let mut rounds = 0;
    while rounds < config.lp_max_rounds {
        rounds += 1;
        order.shuffle(&mut rng);
        for &u in &order {
            if graph.degree(u) == 0 {
                continue;
            }
            counter.tally(graph, &labels, u);
            if counter.best.binary_search(&labels[u]).is_err() {
                labels[u] = *counter.best.choose(&mut rng).expect("node has neighbors");
            }
        }
        let stable = (0..n).all(|u| {
            graph.degree(u) == 0 || {
                counter.tally(graph, &labels, u);
                counter.best.binary_search(&labels[u]).is_ok()
            }
        });
        if stable {
            converged = true;
            break;
        }
    }

    Ok(LabelPropagationRun {
        clustering: Clustering::from_labels(&labels),
        converged,
        rounds,
    })
}
