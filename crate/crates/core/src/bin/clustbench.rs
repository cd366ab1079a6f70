use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use clustbench::algorithms;
use clustbench::graph::{load_clustering, load_edge_list, write_clustering, write_edge_list};
use clustbench::harness::{self, emit_results, Execution, ExperimentConfig, MetricReport};
use clustbench::lfr::{self, LfrParams};
use clustbench::{AlgoConfig, Algorithm, Clustering, Error, Graph, Result};

#[derive(Parser)]
#[command(
    name = "clustbench",
    version,
    about = "Community-detection benchmark toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an LFR benchmark graph and its planted communities.
    Generate(GenerateArgs),
    /// Cluster a graph with one algorithm.
    Cluster(ClusterArgs),
    /// Print quality (and, given a truth file, recovery) metrics as JSON.
    Evaluate(EvaluateArgs),
    /// Run an experiment described by a TOML config file.
    Experiment(ExperimentArgs),
    /// Score real-world graphs (no gold standard) with several algorithms.
    Score(ScoreArgs),
    /// Convert a SNAP-style edge list into a canonical edge list (ids 1..n).
    Ingest(IngestArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Number of nodes.
    #[arg(long = "N")]
    n: usize,
    /// Average degree.
    #[arg(long, default_value_t = 25.0)]
    k: f64,
    /// Maximum degree [default: N/10].
    #[arg(long)]
    maxk: Option<usize>,
    /// Mixing parameter.
    #[arg(long)]
    mu: f64,
    /// Degree exponent magnitude.
    #[arg(long, default_value_t = 2.0)]
    t1: f64,
    /// Community-size exponent magnitude.
    #[arg(long, default_value_t = 1.0)]
    t2: f64,
    /// Minimum community size.
    #[arg(long, default_value_t = 50)]
    minc: usize,
    /// Maximum community size [default: N/10].
    #[arg(long)]
    maxc: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Edge-list output file.
    #[arg(long)]
    graph: PathBuf,
    /// Community output file.
    #[arg(long)]
    communities: PathBuf,
}

#[derive(Args)]
struct AlgoArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    louvain_restarts: usize,
    #[arg(long, default_value_t = 10)]
    slm_random_starts: usize,
    #[arg(long, default_value_t = 10)]
    slm_iterations_per_start: usize,
    #[arg(long, default_value_t = 1.0)]
    resolution: f64,
    #[arg(long, default_value_t = 1000)]
    lp_max_rounds: usize,
    #[arg(long, default_value_t = 10)]
    infomap_outer_loops: usize,
}

impl AlgoArgs {
    fn config(&self) -> AlgoConfig {
        AlgoConfig {
            seed: self.seed,
            louvain_restarts: self.louvain_restarts,
            slm_random_starts: self.slm_random_starts,
            slm_iterations_per_start: self.slm_iterations_per_start,
            resolution: self.resolution,
            lp_max_rounds: self.lp_max_rounds,
            infomap_outer_loops: self.infomap_outer_loops,
        }
    }
}

#[derive(Args)]
struct ClusterArgs {
    /// louvain, slm, infomap or lp.
    #[arg(long)]
    algorithm: Algorithm,
    /// Edge-list input file.
    #[arg(long)]
    graph: PathBuf,
    /// Community output file [default: standard output].
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    algo: AlgoArgs,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    clustering: PathBuf,
    /// Planted communities; enables ARI, NMI and LFK NMI.
    #[arg(long)]
    truth: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    config: PathBuf,
    /// Run jobs one at a time instead of on the thread pool.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct ScoreArgs {
    /// Edge-list files; each file name becomes the graph id.
    #[arg(required = true)]
    graphs: Vec<PathBuf>,
    /// Comma-separated algorithm list.
    #[arg(long, value_delimiter = ',', default_value = "louvain,slm,infomap,lp")]
    algorithms: Vec<Algorithm>,
    /// Directory receiving runs.csv.
    #[arg(long)]
    output_dir: PathBuf,
    #[command(flatten)]
    algo: AlgoArgs,
}

#[derive(Args)]
struct IngestArgs {
    input: PathBuf,
    output: PathBuf,
    /// Also write `new_id<TAB>original_id` lines here.
    #[arg(long)]
    map: Option<PathBuf>,
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::File {
            path: path.display().to_string(),
            source: e,
        })
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::File {
            path: path.display().to_string(),
            source: e,
        })
}

fn read_graph(path: &Path) -> Result<Graph> {
    let (graph, report) = load_edge_list(open(path)?)?;
    if report.duplicate_edges + report.self_loops > 0 {
        eprintln!(
            "warning: {}: dropped {} duplicate edges and {} self-loops",
            path.display(),
            report.duplicate_edges,
            report.self_loops
        );
    }
    Ok(graph)
}

fn read_clustering(graph: &Graph, path: &Path) -> Result<Clustering> {
    graph.align_clustering(&load_clustering(open(path)?)?)
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.into()))?;
    println!("{text}");
    Ok(())
}

#[derive(Serialize)]
struct GenerateReport {
    nodes: usize,
    edges: usize,
    communities: usize,
    empirical_mu: f64,
}

fn generate(args: GenerateArgs) -> Result<()> {
    let params = LfrParams {
        n: args.n,
        k_avg: args.k,
        k_max: args.maxk.unwrap_or(args.n / 10),
        mu: args.mu,
        tau1: args.t1,
        tau2: args.t2,
        c_min: args.minc,
        c_max: args.maxc.unwrap_or(args.n / 10),
        seed: args.seed,
    };
    let gold = lfr::generate(&params)?;
    write_edge_list(&gold.graph, create(&args.graph)?)?;
    write_clustering(&gold.truth, create(&args.communities)?)?;
    print_json(&GenerateReport {
        nodes: gold.graph.node_count(),
        edges: gold.graph.edge_count(),
        communities: gold.truth.community_count(),
        empirical_mu: gold.empirical_mu,
    })
}

fn cluster(args: ClusterArgs) -> Result<()> {
    let graph = read_graph(&args.graph)?;
    let run = algorithms::run(args.algorithm, &graph, &args.algo.config())?;
    if !run.converged {
        eprintln!("warning: label propagation stopped at the round budget");
    }
    let external = graph.externalize_clustering(&run.clustering)?;
    match args.out {
        Some(path) => write_clustering(&external, create(&path)?),
        None => write_clustering(&external, io::stdout().lock()),
    }
}

#[derive(Serialize)]
struct EvaluateReport {
    modularity: f64,
    conductance: f64,
    coverage: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    ari: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nmi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lfk_nmi: Option<f64>,
}

fn evaluate(args: EvaluateArgs) -> Result<()> {
    let graph = read_graph(&args.graph)?;
    let found = read_clustering(&graph, &args.clustering)?;
    let truth = args
        .truth
        .map(|p| read_clustering(&graph, &p))
        .transpose()?;
    let m = MetricReport::score(&graph, &found, truth.as_ref())?;
    print_json(&EvaluateReport {
        modularity: m.modularity,
        conductance: m.conductance,
        coverage: m.coverage,
        ari: m.ari,
        nmi: m.nmi,
        lfk_nmi: m.lfk_nmi,
    })
}

fn experiment(args: ExperimentArgs) -> Result<()> {
    let config = ExperimentConfig::load(&args.config)?;
    let execution = if args.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    let records = harness::execute(&config, execution)?;
    let failed = records.iter().filter(|r| r.outcome.is_err()).count();
    eprintln!(
        "{} runs ({} failed) written to {}",
        records.len(),
        failed,
        config.output_dir.display()
    );
    Ok(())
}

fn score(args: ScoreArgs) -> Result<()> {
    harness::ensure_writable(&args.output_dir)?;
    let config = args.algo.config();
    let mut records = Vec::new();
    for path in &args.graphs {
        let graph = read_graph(path)?;
        let id = path
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        records.extend(harness::score_real_world(
            &id,
            &graph,
            &args.algorithms,
            &config,
        )?);
    }
    emit_results(&records, &[], &args.output_dir)?;
    eprintln!(
        "{} runs written to {}",
        records.len(),
        args.output_dir.display()
    );
    Ok(())
}

fn ingest(args: IngestArgs) -> Result<()> {
    let (graph, report) = load_edge_list(open(&args.input)?)?;
    let canonical = Graph::from_edges(graph.node_count(), &graph.edges().collect::<Vec<_>>())?;
    write_edge_list(&canonical, create(&args.output)?)?;
    if let Some(path) = &args.map {
        let mut out = create(path)?;
        for (i, label) in graph.labels().iter().enumerate() {
            writeln!(out, "{}\t{}", i + 1, label)?;
        }
        out.flush()?;
    }
    eprintln!(
        "{} nodes, {} edges ({} duplicate edges and {} self-loops dropped)",
        graph.node_count(),
        graph.edge_count(),
        report.duplicate_edges,
        report.self_loops
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Cluster(a) => cluster(a),
        Command::Evaluate(a) => evaluate(a),
        Command::Experiment(a) => experiment(a),
        Command::Score(a) => score(a),
        Command::Ingest(a) => ingest(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
