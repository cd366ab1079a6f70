//! Stand-alone clustering quality: modularity, conductance and coverage.
//!
//! All three are computed from a single pass over the edge list
//! ([`summarize_edges`]). Each is oriented so that 1 is the best score.
//!
//! Conductance of a cluster `S` uses `cut_S / min{A(S), A(S̄)}` where
//! `A(S) = intra_S + cut_S` counts edges touching `S` and
//! `A(S̄) = m − intra_S` counts edges touching the complement. A zero
//! denominator yields conductance 0, so the single-community partition scores
//! a graph conductance of 1 (the same triviality coverage has).

use crate::error::{Error, Result};
use crate::graph::{Clustering, Graph};

/// Per-community edge tallies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterEdgeSummary {
    pub intra_edges: Vec<usize>,
    pub volume: Vec<usize>,
    pub cut_edges: Vec<usize>,
    pub edge_count: usize,
}

impl ClusterEdgeSummary {
    /// Builds a summary directly from per-community intra-edge counts and
    /// volumes (cut = volume − 2·intra).
    pub fn from_counts(
        intra_edges: Vec<usize>,
        volume: Vec<usize>,
        edge_count: usize,
    ) -> Result<Self> {
        if intra_edges.len() != volume.len() {
            return Err(Error::Metric("intra and volume lengths differ".into()));
        }
        let cut_edges = intra_edges
            .iter()
            .zip(&volume)
            .map(|(&i, &v)| {
                v.checked_sub(2 * i)
                    .ok_or_else(|| Error::Metric(format!("volume {v} < 2·intra {i}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ClusterEdgeSummary {
            intra_edges,
            volume,
            cut_edges,
            edge_count,
        })
    }

    pub fn community_count(&self) -> usize {
        self.intra_edges.len()
    }
}

pub fn summarize_edges(graph: &Graph, clustering: &Clustering) -> Result<ClusterEdgeSummary> {
    if graph.node_count() != clustering.node_count() {
        return Err(Error::InvalidClustering(format!(
            "clustering covers {} nodes, graph has {}",
            clustering.node_count(),
            graph.node_count()
        )));
    }
    let k = clustering.community_count();
    let mut intra = vec![0; k];
    let mut cut = vec![0; k];
    for (u, v) in graph.edges() {
        let (cu, cv) = (clustering.community_of(u), clustering.community_of(v));
        if cu == cv {
            intra[cu] += 1;
        } else {
            cut[cu] += 1;
            cut[cv] += 1;
        }
    }
    let volume = intra.iter().zip(&cut).map(|(&i, &c)| 2 * i + c).collect();
    Ok(ClusterEdgeSummary {
        intra_edges: intra,
        volume,
        cut_edges: cut,
        edge_count: graph.edge_count(),
    })
}

/// `Σ_k (e_kk − a_k²)` with `e_kk = 2·intra_k/2m` and `a_k = volume_k/2m`.
pub fn modularity(summary: &ClusterEdgeSummary) -> Result<f64> {
    if summary.edge_count == 0 {
        return Err(Error::Metric("modularity of a graph without edges".into()));
    }
    let two_m = 2.0 * summary.edge_count as f64;
    Ok(summary
        .intra_edges
        .iter()
        .zip(&summary.volume)
        .map(|(&i, &v)| 2.0 * i as f64 / two_m - (v as f64 / two_m).powi(2))
        .sum())
}

pub fn cluster_conductance(summary: &ClusterEdgeSummary, community: usize) -> Result<f64> {
    if community >= summary.community_count() {
        return Err(Error::Metric(format!("no community {community}")));
    }
    let intra = summary.intra_edges[community];
    let cut = summary.cut_edges[community];
    let touching = intra + cut;
    let complement = summary.edge_count - intra;
    let denom = touching.min(complement);
    if denom == 0 {
        return Ok(0.0);
    }
    Ok(cut as f64 / denom as f64)
}

/// `1 − mean_k φ(S_k)`.
pub fn graph_conductance(summary: &ClusterEdgeSummary) -> Result<f64> {
    let k = summary.community_count();
    if k == 0 {
        return Err(Error::Metric("conductance of an empty clustering".into()));
    }
    let mut total = 0.0;
    for c in 0..k {
        total += cluster_conductance(summary, c)?;
    }
    Ok(1.0 - total / k as f64)
}

/// Fraction of edges that fall inside a community.
pub fn coverage(summary: &ClusterEdgeSummary) -> Result<f64> {
    if summary.edge_count == 0 {
        return Err(Error::Metric("coverage of a graph without edges".into()));
    }
    let intra: usize = summary.intra_edges.iter().sum();
    Ok(intra as f64 / summary.edge_count as f64)
}

/// The three stand-alone metrics for one clustering.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QualityScores {
    pub modularity: f64,
    pub conductance: f64,
    pub coverage: f64,
}

pub fn quality_scores(graph: &Graph, clustering: &Clustering) -> Result<QualityScores> {
    let summary = summarize_edges(graph, clustering)?;
    Ok(QualityScores {
        modularity: modularity(&summary)?,
        conductance: graph_conductance(&summary)?,
        coverage: coverage(&summary)?,
    })
}
