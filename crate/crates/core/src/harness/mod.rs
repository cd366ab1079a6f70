//! The end-to-end experiment pipeline: generate LFR realizations, cluster
//! each one with every configured algorithm, score the result against the
//! planted partition, and aggregate the scores into per-group distributions.
//!
//! Jobs are independent and run on a rayon pool when the `parallel` feature
//! is enabled. Output order never depends on scheduling, so runs.csv and
//! summary.json are byte-identical across repeats of the same config.

mod output;
mod summary;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::algorithms::{self, AlgoConfig, Algorithm};
use crate::error::{Error, Result};
use crate::graph::{Clustering, Graph};
use crate::lfr::{self, GoldStandard, LfrParams};
use crate::quality::quality_scores;
use crate::recovery::recovery_scores;
use crate::seed;

pub use output::{emit_results, write_artifacts, RUNS_HEADER};
pub use summary::{kde, sample_std, scott_bandwidth, summarize, Distribution, DENSITY_POINTS};

/// An experiment description, normally read from a TOML file:
///
/// ```toml
/// sizes = [1000]
/// mus = [0.4, 0.6]
/// realizations = 10
/// algorithms = ["louvain", "slm", "infomap", "lp"]
/// base_seed = 7
/// output_dir = "results"
///
/// [algo]
/// louvain_restarts = 10
/// ```
///
/// `algo.seed` is ignored here; every run gets a seed derived from
/// `base_seed` and its coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub sizes: Vec<usize>,
    pub mus: Vec<f64>,
    pub realizations: usize,
    pub algorithms: Vec<Algorithm>,
    #[serde(default)]
    pub base_seed: u64,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub algo: AlgoConfig,
    /// Fill the wall_time_s column. Off by default because timings would
    /// make runs.csv differ between repeats.
    #[serde(default)]
    pub record_wall_time: bool,
    /// Also write every generated graph, planted partition and found
    /// clustering under `output_dir`.
    #[serde(default)]
    pub persist_artifacts: bool,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.realizations == 0 {
            return Err(Error::Config("realizations must be at least 1".into()));
        }
        for (name, empty) in [
            ("sizes", self.sizes.is_empty()),
            ("mus", self.mus.is_empty()),
            ("algorithms", self.algorithms.is_empty()),
        ] {
            if empty {
                return Err(Error::Config(format!("{name} must not be empty")));
            }
        }
        self.algo.validate()?;
        for &size in &self.sizes {
            for &mu in &self.mus {
                LfrParams::scaled(size, mu, 0)
                    .validate()
                    .map_err(|e| Error::Config(format!("size {size}, mu {mu}: {e}")))?;
            }
        }
        Ok(())
    }

    /// The generator parameters of one realization.
    pub fn lfr_params(&self, size: usize, mu: f64, realization: usize) -> LfrParams {
        let seed = seed::derive(
            self.base_seed,
            &[size as u64, mu.to_bits(), realization as u64],
        );
        LfrParams::scaled(size, mu, seed)
    }

    pub fn algorithm_seed(
        &self,
        size: usize,
        mu: f64,
        realization: usize,
        algorithm: Algorithm,
    ) -> u64 {
        seed::derive(
            self.base_seed,
            &[
                size as u64,
                mu.to_bits(),
                realization as u64,
                algorithm.tag(),
            ],
        )
    }
}

pub fn graph_id(size: usize, mu: f64, realization: usize) -> String {
    format!("lfr-n{size}-mu{mu}-r{realization}")
}

/// Metric values of one run. Recovery metrics are absent for graphs without
/// a gold standard.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MetricReport {
    pub modularity: f64,
    pub conductance: f64,
    pub coverage: f64,
    pub ari: Option<f64>,
    pub nmi: Option<f64>,
    pub lfk_nmi: Option<f64>,
}

impl MetricReport {
    pub fn score(graph: &Graph, found: &Clustering, truth: Option<&Clustering>) -> Result<Self> {
        let q = quality_scores(graph, found)?;
        let r = truth.map(|t| recovery_scores(found, t)).transpose()?;
        Ok(MetricReport {
            modularity: q.modularity,
            conductance: q.conductance,
            coverage: q.coverage,
            ari: r.map(|r| r.ari),
            nmi: r.map(|r| r.nmi),
            lfk_nmi: r.map(|r| r.lfk_nmi),
        })
    }

    pub fn get(&self, metric: Metric) -> Option<f64> {
        match metric {
            Metric::Modularity => Some(self.modularity),
            Metric::Conductance => Some(self.conductance),
            Metric::Coverage => Some(self.coverage),
            Metric::Ari => self.ari,
            Metric::Nmi => self.nmi,
            Metric::LfkNmi => self.lfk_nmi,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Modularity,
    Conductance,
    Coverage,
    Ari,
    Nmi,
    LfkNmi,
}

impl Metric {
    pub const ALL: [Metric; 6] = [
        Metric::Modularity,
        Metric::Conductance,
        Metric::Coverage,
        Metric::Ari,
        Metric::Nmi,
        Metric::LfkNmi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Modularity => "modularity",
            Metric::Conductance => "conductance",
            Metric::Coverage => "coverage",
            Metric::Ari => "ari",
            Metric::Nmi => "nmi",
            Metric::LfkNmi => "lfk_nmi",
        }
    }
}

/// One (graph, algorithm) run. `outcome` holds the metrics, or the error
/// message if generation, clustering or scoring failed.
#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub graph_id: String,
    /// Benchmark coordinates; absent for real-world graphs.
    pub size: Option<usize>,
    pub mu: Option<f64>,
    pub realization: Option<usize>,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub wall_time_s: Option<f64>,
    /// False when label propagation stopped at its round budget.
    pub converged: bool,
    pub outcome: std::result::Result<MetricReport, String>,
}

impl RunRecord {
    pub fn metrics(&self) -> Option<&MetricReport> {
        self.outcome.as_ref().ok()
    }
}

/// How independent jobs are scheduled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

/// Applies `f` to every item, returning results in input order.
fn map_jobs<T, R, F>(execution: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match execution {
        Execution::Sequential => items.iter().map(f).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
    }
}

/// Everything produced by one experiment batch.
#[derive(Clone, Debug)]
pub struct ExperimentOutput {
    pub records: Vec<RunRecord>,
    /// Generated gold standards in (size, mu, realization) order, `Err` for
    /// failed generations. Kept only when artifacts are persisted.
    pub graphs: Vec<(String, std::result::Result<GoldStandard, String>)>,
    /// Found clusterings aligned with `records`. Kept only when artifacts
    /// are persisted.
    pub clusterings: Vec<Option<Clustering>>,
}

struct GraphJob {
    size: usize,
    mu: f64,
    realization: usize,
}

struct RunJob<'a> {
    job: &'a GraphJob,
    gold: &'a std::result::Result<GoldStandard, String>,
    algorithm: Algorithm,
}

/// Creates `dir` and checks that a file can be written into it.
pub fn ensure_writable(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::file(dir, e))?;
    let probe = dir.join(".clustbench-write-probe");
    fs::write(&probe, b"").map_err(|e| Error::file(dir, e))?;
    fs::remove_file(&probe).map_err(|e| Error::file(&probe, e))?;
    Ok(())
}

/// Runs the whole batch with the default scheduler. Nothing is written;
/// see [`execute`] for the full pipeline.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    Ok(run_experiment_with(config, Execution::default())?.records)
}

pub fn run_experiment_with(
    config: &ExperimentConfig,
    execution: Execution,
) -> Result<ExperimentOutput> {
    config.validate()?;
    let mut graph_jobs = Vec::new();
    for &size in &config.sizes {
        for &mu in &config.mus {
            for realization in 0..config.realizations {
                graph_jobs.push(GraphJob {
                    size,
                    mu,
                    realization,
                });
            }
        }
    }

    let golds = map_jobs(execution, &graph_jobs, |job| {
        lfr::generate(&config.lfr_params(job.size, job.mu, job.realization))
            .map_err(|e| e.to_string())
    });

    let run_jobs: Vec<RunJob> = graph_jobs
        .iter()
        .zip(&golds)
        .flat_map(|(job, gold)| {
            config.algorithms.iter().map(move |&algorithm| RunJob {
                job,
                gold,
                algorithm,
            })
        })
        .collect();

    let results = map_jobs(execution, &run_jobs, |run| {
        let job = run.job;
        let seed = config.algorithm_seed(job.size, job.mu, job.realization, run.algorithm);
        let mut record = RunRecord {
            graph_id: graph_id(job.size, job.mu, job.realization),
            size: Some(job.size),
            mu: Some(job.mu),
            realization: Some(job.realization),
            algorithm: run.algorithm,
            seed,
            wall_time_s: None,
            converged: false,
            outcome: Err(String::new()),
        };
        let gold = match run.gold {
            Ok(gold) => gold,
            Err(e) => {
                record.outcome = Err(e.clone());
                return (record, None);
            }
        };
        let algo = AlgoConfig {
            seed,
            ..config.algo.clone()
        };
        let start = Instant::now();
        let clustered = algorithms::run(run.algorithm, &gold.graph, &algo);
        let elapsed = start.elapsed().as_secs_f64();
        if config.record_wall_time {
            record.wall_time_s = Some(elapsed);
        }
        match clustered {
            Ok(found) => {
                record.converged = found.converged;
                record.outcome =
                    MetricReport::score(&gold.graph, &found.clustering, Some(&gold.truth))
                        .map_err(|e| e.to_string());
                (record, Some(found.clustering))
            }
            Err(e) => {
                record.outcome = Err(e.to_string());
                (record, None)
            }
        }
    });

    let (records, clusterings): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    let keep = config.persist_artifacts;
    Ok(ExperimentOutput {
        records,
        graphs: if keep {
            graph_jobs
                .iter()
                .zip(golds)
                .map(|(j, g)| (graph_id(j.size, j.mu, j.realization), g))
                .collect()
        } else {
            Vec::new()
        },
        clusterings: if keep { clusterings } else { Vec::new() },
    })
}

/// Validates the config, checks the output directory, runs the batch,
/// summarizes it and writes runs.csv, summary.json, failures.csv and (if
/// configured) the artifacts.
pub fn execute(config: &ExperimentConfig, execution: Execution) -> Result<Vec<RunRecord>> {
    config.validate()?;
    ensure_writable(&config.output_dir)?;
    let output = run_experiment_with(config, execution)?;
    let groups = summarize_groups(config, &output.records);
    emit_results(&output.records, &groups, &config.output_dir)?;
    if config.persist_artifacts {
        write_artifacts(&output, &config.output_dir)?;
    }
    Ok(output.records)
}

/// Clusters a graph without a gold standard with each algorithm and scores
/// the three stand-alone metrics. Recovery metrics are left absent.
pub fn score_real_world(
    graph_id: &str,
    graph: &Graph,
    algorithms: &[Algorithm],
    config: &AlgoConfig,
) -> Result<Vec<RunRecord>> {
    algorithms
        .iter()
        .map(|&algorithm| {
            let start = Instant::now();
            let found = algorithms::run(algorithm, graph, config)?;
            let wall = start.elapsed().as_secs_f64();
            let metrics = MetricReport::score(graph, &found.clustering, None)?;
            Ok(RunRecord {
                graph_id: graph_id.to_string(),
                size: None,
                mu: None,
                realization: None,
                algorithm,
                seed: config.seed,
                wall_time_s: Some(wall),
                converged: found.converged,
                outcome: Ok(metrics),
            })
        })
        .collect()
}

/// One cell of the algorithm × metric × size × mu matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryGroup {
    pub algorithm: Algorithm,
    pub metric: Metric,
    pub size: usize,
    pub mu: f64,
    /// Absent when every run in the group failed.
    pub summary: Option<Distribution>,
}

/// Groups successful runs by (algorithm, metric, size, mu), in that nesting
/// order following the config's list order.
pub fn summarize_groups(config: &ExperimentConfig, records: &[RunRecord]) -> Vec<SummaryGroup> {
    let mut groups = Vec::new();
    for &algorithm in &config.algorithms {
        for metric in Metric::ALL {
            for &size in &config.sizes {
                for &mu in &config.mus {
                    let values: Vec<f64> = records
                        .iter()
                        .filter(|r| {
                            r.algorithm == algorithm && r.size == Some(size) && r.mu == Some(mu)
                        })
                        .filter_map(|r| r.metrics().and_then(|m| m.get(metric)))
                        .collect();
                    groups.push(SummaryGroup {
                        algorithm,
                        metric,
                        size,
                        mu,
                        summary: summarize(&values).ok(),
                    });
                }
            }
        }
    }
    groups
}
