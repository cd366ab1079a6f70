//! Community-detection benchmark toolkit.
//!
//! Generates LFR benchmark graphs with planted communities, clusters them with
//! Louvain, smart local moving, two-level Infomap and label propagation, and
//! scores the results with stand-alone quality metrics (modularity,
//! conductance, coverage) and information-recovery metrics (ARI, NMI and the
//! LFK variant of NMI). The [`harness`] module ties these together into a
//! seeded, reproducible experiment pipeline.

pub mod algorithms;
pub mod error;
pub mod graph;
pub mod harness;
pub mod lfr;
pub mod quality;
pub mod recovery;
pub mod seed;

#[cfg(test)]
pub(crate) mod testkit;

pub use algorithms::{AlgoConfig, Algorithm};
pub use error::{Error, Result};
pub use graph::{Clustering, Graph, WeightedGraph};
pub use lfr::{GoldStandard, LfrParams};
