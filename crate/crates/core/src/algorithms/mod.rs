//! The four clustering algorithms. Each is a pure function of the graph and
//! an [`AlgoConfig`] (including its seed) and returns a partition of the base
//! graph's nodes.

mod infomap;
mod label_propagation;
mod louvain;
mod modularity;
mod slm;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Clustering, Graph};

pub use infomap::{infomap, infomap_with_observer, map_equation, MapEquationState};
pub use label_propagation::{label_propagation, LabelPropagationRun};
pub use louvain::louvain;
pub use modularity::{modularity_gain, ModularityState};
pub use slm::smart_local_moving;

/// Moves must improve their objective by more than this to be accepted.
pub(crate) const MIN_IMPROVEMENT: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AlgoConfig {
    pub seed: u64,
    pub louvain_restarts: usize,
    pub slm_random_starts: usize,
    pub slm_iterations_per_start: usize,
    pub resolution: f64,
    pub lp_max_rounds: usize,
    pub infomap_outer_loops: usize,
}

impl Default for AlgoConfig {
    fn default() -> Self {
        AlgoConfig {
            seed: 0,
            louvain_restarts: 10,
            slm_random_starts: 10,
            slm_iterations_per_start: 10,
            resolution: 1.0,
            lp_max_rounds: 1000,
            infomap_outer_loops: 10,
        }
    }
}

impl AlgoConfig {
    pub fn with_seed(seed: u64) -> Self {
        AlgoConfig {
            seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("louvain_restarts", self.louvain_restarts),
            ("slm_random_starts", self.slm_random_starts),
            ("slm_iterations_per_start", self.slm_iterations_per_start),
            ("lp_max_rounds", self.lp_max_rounds),
            ("infomap_outer_loops", self.infomap_outer_loops),
        ];
        for (name, value) in counts {
            if value == 0 {
                return Err(Error::InvalidParams(format!("{name} must be at least 1")));
            }
        }
        if !(self.resolution > 0.0 && self.resolution.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "resolution must be positive, got {}",
                self.resolution
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Louvain,
    Slm,
    Infomap,
    #[serde(rename = "lp")]
    LabelPropagation,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Louvain,
        Algorithm::Slm,
        Algorithm::Infomap,
        Algorithm::LabelPropagation,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Algorithm::Louvain => "louvain",
            Algorithm::Slm => "slm",
            Algorithm::Infomap => "infomap",
            Algorithm::LabelPropagation => "lp",
        }
    }

    /// Stable numeric tag used when deriving per-algorithm seeds.
    pub(crate) fn tag(self) -> u64 {
        match self {
            Algorithm::Louvain => 1,
            Algorithm::Slm => 2,
            Algorithm::Infomap => 3,
            Algorithm::LabelPropagation => 4,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.token() == s)
            .ok_or_else(|| {
                Error::InvalidParams(format!(
                    "unknown algorithm {s:?} (expected louvain, slm, infomap or lp)"
                ))
            })
    }
}

/// Result of one algorithm invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct ClusterRun {
    pub clustering: Clustering,
    /// False only when label propagation hit its round budget.
    pub converged: bool,
}

pub fn run(algorithm: Algorithm, graph: &Graph, config: &AlgoConfig) -> Result<ClusterRun> {
    config.validate()?;
    let run = match algorithm {
        Algorithm::Louvain => ClusterRun {
            clustering: louvain(graph, config)?,
            converged: true,
        },
        Algorithm::Slm => ClusterRun {
            clustering: smart_local_moving(graph, config)?,
            converged: true,
        },
        Algorithm::Infomap => ClusterRun {
            clustering: infomap(graph, config)?,
            converged: true,
        },
        Algorithm::LabelPropagation => {
            let lp = label_propagation(graph, config)?;
            ClusterRun {
                clustering: lp.clustering,
                converged: lp.converged,
            }
        }
    };
    Ok(run)
}

/// Renumbers arbitrary community ids to `0..k` in order of first appearance.
pub(crate) fn compact(labels: &mut [usize]) -> usize {
    let mut map = vec![usize::MAX; labels.len().max(1)];
    let mut next = 0;
    for l in labels.iter_mut() {
        if *l >= map.len() {
            map.resize(*l + 1, usize::MAX);
        }
        if map[*l] == usize::MAX {
            map[*l] = next;
            next += 1;
        }
        *l = map[*l];
    }
    next
}

pub(crate) fn check_graph(graph: &Graph) -> Result<()> {
    if graph.node_count() == 0 {
        return Err(Error::InvalidGraph("graph has no nodes".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algorithm_tokens_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.token().parse::<Algorithm>().unwrap(), a);
        }
        assert!("leiden".parse::<Algorithm>().is_err());
    }

    #[test]
    fn config_validation() {
        assert!(AlgoConfig::default().validate().is_ok());
        let bad = AlgoConfig {
            resolution: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = AlgoConfig {
            slm_iterations_per_start: 0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn compact_renumbers_in_first_appearance_order() {
        let mut l = vec![5, 5, 2, 9, 2];
        assert_eq!(compact(&mut l), 3);
        assert_eq!(l, vec![0, 0, 1, 2, 1]);
    }
}
