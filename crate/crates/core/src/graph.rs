//! Graph and partition data model, plus the plain-text formats used to move
//! them on and off disk.
//!
//! Node ids are contiguous `0..n` inside the crate. Files use 1-based ids; the
//! edge-list loader keeps the original external id of every node so that
//! community files written against the same ids can be aligned afterwards.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Immutable undirected simple graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
    labels: Vec<u64>,
}

impl Graph {
    /// Builds a graph over nodes `0..node_count`. Self-loops, duplicate edges
    /// and out-of-range endpoints are rejected.
    pub fn from_edges(node_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let labels = (1..=node_count as u64).collect();
        Self::from_edges_labeled(node_count, edges, labels)
    }

    fn from_edges_labeled(
        node_count: usize,
        edges: &[(usize, usize)],
        labels: Vec<u64>,
    ) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); node_count];
        for &(u, v) in edges {
            if u >= node_count || v >= node_count {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for {node_count} nodes"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop on node {u}")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for (u, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidGraph(format!("duplicate edge at node {u}")));
            }
        }
        Ok(Graph {
            adjacency,
            edge_count: edges.len(),
            labels,
        })
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    /// Sorted neighbor list.
    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Sum of degrees over a node set.
    pub fn volume(&self, nodes: impl IntoIterator<Item = usize>) -> usize {
        nodes.into_iter().map(|v| self.degree(v)).sum()
    }

    /// Every undirected edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// External id of each internal node.
    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    /// True when the external ids are exactly `1..=n` in internal order.
    pub fn has_canonical_labels(&self) -> bool {
        self.labels
            .iter()
            .enumerate()
            .all(|(i, &l)| l == i as u64 + 1)
    }

    /// Reorders a clustering indexed by external id (`node i` is external id
    /// `i + 1`, as produced by [`load_clustering`]) into internal node order.
    pub fn align_clustering(&self, external: &Clustering) -> Result<Clustering> {
        if external.node_count() != self.node_count() {
            return Err(Error::InvalidClustering(format!(
                "clustering covers {} nodes, graph has {}",
                external.node_count(),
                self.node_count()
            )));
        }
        let mut labels = Vec::with_capacity(self.node_count());
        for &ext in &self.labels {
            let idx = ext
                .checked_sub(1)
                .map(|i| i as usize)
                .filter(|&i| i < external.node_count())
                .ok_or_else(|| {
                    Error::InvalidClustering(format!(
                        "graph node id {ext} has no entry in the community file"
                    ))
                })?;
            labels.push(external.community_of(idx));
        }
        Ok(Clustering::from_labels(&labels))
    }

    /// Inverse of [`Graph::align_clustering`]: reindexes a clustering over
    /// internal nodes by external id. Requires external ids to be `1..=n`.
    pub fn externalize_clustering(&self, internal: &Clustering) -> Result<Clustering> {
        let n = self.node_count();
        let mut labels = vec![usize::MAX; n];
        for (node, &ext) in self.labels.iter().enumerate() {
            let slot = (ext as usize)
                .checked_sub(1)
                .filter(|&i| i < n)
                .ok_or_else(|| {
                    Error::InvalidClustering(format!(
                        "external id {ext} outside 1..={n}; run `ingest` first"
                    ))
                })?;
            labels[slot] = internal.community_of(node);
        }
        Ok(Clustering::from_labels(&labels))
    }

    /// Connected components as a per-node component id, ids in order of
    /// lowest member.
    pub fn components(&self) -> (usize, Vec<usize>) {
        let n = self.node_count();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        let mut stack = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = count;
            stack.push(start);
            while let Some(u) = stack.pop() {
                for &v in &self.adjacency[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = count;
                        stack.push(v);
                    }
                }
            }
            count += 1;
        }
        (count, comp)
    }

    /// Induced subgraph on `nodes` (internal ids in the returned graph follow
    /// the order of `nodes`).
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Graph {
        let index: HashMap<usize, usize> = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut edges = Vec::new();
        for (i, &u) in nodes.iter().enumerate() {
            for &v in &self.adjacency[u] {
                if let Some(&j) = index.get(&v) {
                    if i < j {
                        edges.push((i, j));
                    }
                }
            }
        }
        let labels = nodes.iter().map(|&v| self.labels[v]).collect();
        Graph::from_edges_labeled(nodes.len(), &edges, labels)
            .expect("induced subgraph of a simple graph is simple")
    }
}

/// Counts of input lines dropped while loading an edge list.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IngestReport {
    pub duplicate_edges: usize,
    pub self_loops: usize,
}

/// Reads a whitespace-separated edge list. Lines starting with `#` are
/// comments. Node ids are compacted to `0..n` in order of first appearance.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<(Graph, IngestReport)> {
    let mut index: HashMap<u64, usize> = HashMap::new();
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut report = IngestReport::default();

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let mut endpoint = || -> Result<u64> {
            let tok = tokens
                .next()
                .ok_or_else(|| Error::parse(lineno + 1, "expected two node ids"))?;
            tok.parse::<u64>()
                .map_err(|_| Error::parse(lineno + 1, format!("bad node id {tok:?}")))
        };
        let a = endpoint()?;
        let b = endpoint()?;
        let mut intern = |ext: u64| {
            *index.entry(ext).or_insert_with(|| {
                labels.push(ext);
                labels.len() - 1
            })
        };
        let u = intern(a);
        let v = intern(b);
        if u == v {
            report.self_loops += 1;
            continue;
        }
        let key = (u.min(v), u.max(v));
        if !seen.insert(key) {
            report.duplicate_edges += 1;
            continue;
        }
        edges.push(key);
    }

    if edges.is_empty() {
        return Err(Error::InvalidGraph("edge list contains no edges".into()));
    }
    let graph = Graph::from_edges_labeled(labels.len(), &edges, labels)?;
    Ok((graph, report))
}

/// Writes every edge once as `u<TAB>v` using the graph's external ids.
pub fn write_edge_list<W: Write>(graph: &Graph, mut out: W) -> Result<()> {
    let labels = graph.labels();
    for (u, v) in graph.edges() {
        writeln!(out, "{}\t{}", labels[u], labels[v])?;
    }
    out.flush()?;
    Ok(())
}

/// Total assignment of nodes to non-empty, contiguously numbered communities.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Clustering {
    assignment: Vec<usize>,
    sizes: Vec<usize>,
}

impl Clustering {
    /// Compacts arbitrary labels to `0..k` in order of first appearance.
    pub fn from_labels<T: Eq + std::hash::Hash + Copy>(labels: &[T]) -> Self {
        let mut remap: HashMap<T, usize> = HashMap::new();
        let mut sizes = Vec::new();
        let assignment = labels
            .iter()
            .map(|l| {
                let next = remap.len();
                let c = *remap.entry(*l).or_insert(next);
                if c == sizes.len() {
                    sizes.push(0);
                }
                sizes[c] += 1;
                c
            })
            .collect();
        Clustering { assignment, sizes }
    }

    pub fn singletons(n: usize) -> Self {
        Clustering {
            assignment: (0..n).collect(),
            sizes: vec![1; n],
        }
    }

    pub fn single_community(n: usize) -> Self {
        Clustering {
            assignment: vec![0; n],
            sizes: if n == 0 { Vec::new() } else { vec![n] },
        }
    }

    pub fn node_count(&self) -> usize {
        self.assignment.len()
    }

    pub fn community_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn community_of(&self, node: usize) -> usize {
        self.assignment[node]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn community_sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Member lists, one per community, members ascending.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self.sizes.iter().map(|&s| Vec::with_capacity(s)).collect();
        for (v, &c) in self.assignment.iter().enumerate() {
            out[c].push(v);
        }
        out
    }
}

/// Reads `node_id community_id` lines (1-based node ids, any separator of
/// whitespace). The node ids must be exactly `1..=n`.
pub fn load_clustering<R: BufRead>(reader: R) -> Result<Clustering> {
    let mut entries: Vec<(u64, u64, usize)> = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let mut field = |what: &str| -> Result<u64> {
            let tok = tokens
                .next()
                .ok_or_else(|| Error::parse(lineno + 1, format!("missing {what}")))?;
            tok.parse::<u64>()
                .map_err(|_| Error::parse(lineno + 1, format!("bad {what} {tok:?}")))
        };
        let node = field("node id")?;
        let community = field("community id")?;
        entries.push((node, community, lineno + 1));
    }
    if entries.is_empty() {
        return Err(Error::InvalidClustering("community file is empty".into()));
    }

    let n = entries.len();
    let mut slots: Vec<Option<u64>> = vec![None; n];
    for &(node, community, line) in &entries {
        if node == 0 || node as usize > n {
            return Err(Error::InvalidClustering(format!(
                "line {line}: node id {node} outside 1..={n} (missing or non-contiguous nodes)"
            )));
        }
        let slot = &mut slots[node as usize - 1];
        if slot.is_some() {
            return Err(Error::InvalidClustering(format!(
                "line {line}: node {node} listed twice"
            )));
        }
        *slot = Some(community);
    }
    // n entries, no duplicates, all within 1..=n: every slot is filled.
    let labels: Vec<u64> = slots.into_iter().map(|s| s.unwrap()).collect();
    Ok(Clustering::from_labels(&labels))
}

/// Writes `node<TAB>community` lines, 1-based, ordered by node id.
pub fn write_clustering<W: Write>(clustering: &Clustering, mut out: W) -> Result<()> {
    if clustering.node_count() == 0 {
        return Err(Error::InvalidClustering(
            "cannot write an empty clustering".into(),
        ));
    }
    for (node, &c) in clustering.assignment().iter().enumerate() {
        writeln!(out, "{}\t{}", node + 1, c + 1)?;
    }
    out.flush()?;
    Ok(())
}

/// Undirected weighted graph in which a node may carry a self-weight. This is
/// the super-graph produced by collapsing communities.
///
/// `self_weight[v]` counts edges internal to `v`; each counts twice towards
/// `strength(v)`, matching a collapsed community whose volume is
/// `2·intra + cut`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    adjacency: Vec<Vec<(usize, f64)>>,
    self_weight: Vec<f64>,
    strength: Vec<f64>,
    total_weight: f64,
}

impl WeightedGraph {
    pub fn from_graph(graph: &Graph) -> Self {
        let adjacency: Vec<Vec<(usize, f64)>> = (0..graph.node_count())
            .map(|u| graph.neighbors(u).iter().map(|&v| (v, 1.0)).collect())
            .collect();
        let strength = (0..graph.node_count())
            .map(|u| graph.degree(u) as f64)
            .collect();
        WeightedGraph {
            adjacency,
            self_weight: vec![0.0; graph.node_count()],
            strength,
            total_weight: graph.edge_count() as f64,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    /// Neighbors other than the node itself, with edge weights.
    pub fn neighbors(&self, node: usize) -> &[(usize, f64)] {
        &self.adjacency[node]
    }

    pub fn self_weight(&self, node: usize) -> f64 {
        self.self_weight[node]
    }

    /// Weighted degree: `2·self_weight + Σ incident weights`.
    pub fn strength(&self, node: usize) -> f64 {
        self.strength[node]
    }

    /// Total edge weight `m` (self-weights once, other edges once per pair).
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    /// Weight of the edge `u`–`v` (`u != v`), zero when absent.
    pub fn edge_weight(&self, u: usize, v: usize) -> f64 {
        self.adjacency[u]
            .iter()
            .find(|&&(w, _)| w == v)
            .map_or(0.0, |&(_, w)| w)
    }

    /// Collapses each community of `partition` (labels `0..k`, all used) into
    /// one node. Super-node ids equal community ids.
    pub fn aggregate(&self, partition: &[usize], community_count: usize) -> WeightedGraph {
        let mut self_weight = vec![0.0; community_count];
        let mut strength = vec![0.0; community_count];
        let mut maps: Vec<HashMap<usize, f64>> = vec![HashMap::new(); community_count];
        for u in 0..self.node_count() {
            let cu = partition[u];
            self_weight[cu] += self.self_weight[u];
            strength[cu] += self.strength[u];
            for &(v, w) in &self.adjacency[u] {
                let cv = partition[v];
                if cu == cv {
                    // seen from both endpoints
                    self_weight[cu] += w / 2.0;
                } else {
                    *maps[cu].entry(cv).or_insert(0.0) += w;
                }
            }
        }
        let adjacency = maps
            .into_iter()
            .map(|m| {
                let mut list: Vec<(usize, f64)> = m.into_iter().collect();
                list.sort_unstable_by_key(|&(v, _)| v);
                list
            })
            .collect();
        WeightedGraph {
            adjacency,
            self_weight,
            strength,
            total_weight: self.total_weight,
        }
    }

    /// Generalized modularity `Σ_c [in_c/m − γ·(vol_c/2m)²]`.
    pub fn modularity(&self, partition: &[usize], resolution: f64) -> f64 {
        let k = partition.iter().copied().max().map_or(0, |c| c + 1);
        let mut inner = vec![0.0; k];
        let mut volume = vec![0.0; k];
        for u in 0..self.node_count() {
            let c = partition[u];
            inner[c] += self.self_weight[u];
            volume[c] += self.strength[u];
            for &(v, w) in &self.adjacency[u] {
                if partition[v] == c && u < v {
                    inner[c] += w;
                }
            }
        }
        let m = self.total_weight;
        inner
            .iter()
            .zip(&volume)
            .map(|(&i, &vol)| i / m - resolution * (vol / (2.0 * m)).powi(2))
            .sum()
    }

    /// Subgraph induced on `nodes`, keeping each node's full strength so that
    /// modularity gains stay relative to the enclosing graph.
    pub(crate) fn induced_keep_strength(&self, nodes: &[usize]) -> WeightedGraph {
        let index: HashMap<usize, usize> = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let adjacency = nodes
            .iter()
            .map(|&u| {
                self.adjacency[u]
                    .iter()
                    .filter_map(|&(v, w)| index.get(&v).map(|&j| (j, w)))
                    .collect()
            })
            .collect();
        WeightedGraph {
            adjacency,
            self_weight: nodes.iter().map(|&u| self.self_weight[u]).collect(),
            strength: nodes.iter().map(|&u| self.strength[u]).collect(),
            total_weight: self.total_weight,
        }
    }
}

/// Collapses every community of `clustering` into a weighted super-node.
pub fn aggregate(graph: &Graph, clustering: &Clustering) -> Result<WeightedGraph> {
    if clustering.node_count() != graph.node_count() {
        return Err(Error::InvalidClustering(format!(
            "clustering covers {} nodes, graph has {}",
            clustering.node_count(),
            graph.node_count()
        )));
    }
    Ok(WeightedGraph::from_graph(graph)
        .aggregate(clustering.assignment(), clustering.community_count()))
}
