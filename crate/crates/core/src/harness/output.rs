//! Result files: runs.csv, failures.csv, summary.json and optional
//! per-run artifacts.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use super::{ExperimentOutput, RunRecord, SummaryGroup};
use crate::error::{Error, Result};
use crate::graph::{write_clustering, write_edge_list};

pub const RUNS_HEADER: [&str; 10] = [
    "graph_id",
    "algorithm",
    "seed",
    "wall_time_s",
    "modularity",
    "conductance",
    "coverage",
    "ari",
    "nmi",
    "lfk_nmi",
];

fn opt(value: Option<f64>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::file(path, io),
        other => Error::file(path, std::io::Error::other(format!("{other:?}"))),
    }
}

fn write_runs(records: &[RunRecord], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::file(path, e))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    w.write_record(RUNS_HEADER)
        .map_err(|e| csv_error(path, e))?;
    for r in records {
        let m = r.metrics();
        let row = [
            r.graph_id.clone(),
            r.algorithm.token().to_string(),
            r.seed.to_string(),
            opt(r.wall_time_s),
            opt(m.map(|m| m.modularity)),
            opt(m.map(|m| m.conductance)),
            opt(m.map(|m| m.coverage)),
            opt(m.and_then(|m| m.ari)),
            opt(m.and_then(|m| m.nmi)),
            opt(m.and_then(|m| m.lfk_nmi)),
        ];
        w.write_record(&row).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| Error::file(path, e))
}

fn write_failures(records: &[RunRecord], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::file(path, e))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    w.write_record(["graph_id", "algorithm", "seed", "error"])
        .map_err(|e| csv_error(path, e))?;
    for r in records {
        if let Err(message) = &r.outcome {
            w.write_record([
                &r.graph_id,
                r.algorithm.token(),
                &r.seed.to_string(),
                message,
            ])
            .map_err(|e| csv_error(path, e))?;
        }
    }
    w.flush().map_err(|e| Error::file(path, e))
}

#[derive(Serialize)]
struct SummaryFile<'a> {
    groups: &'a [SummaryGroup],
}

fn write_summary(groups: &[SummaryGroup], path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(&SummaryFile { groups })
        .map_err(|e| Error::file(path, e.into()))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::file(path, e))
}

/// Writes runs.csv (one row per record; failed runs keep their row with
/// empty metric cells), failures.csv and summary.json into `dir`.
pub fn emit_results(records: &[RunRecord], groups: &[SummaryGroup], dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::file(dir, e))?;
    write_runs(records, &dir.join("runs.csv"))?;
    write_failures(records, &dir.join("failures.csv"))?;
    write_summary(groups, &dir.join("summary.json"))
}

fn write_with<F>(path: &Path, f: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> Result<()>,
{
    let file = File::create(path).map_err(|e| Error::file(path, e))?;
    let mut w = BufWriter::new(file);
    f(&mut w)?;
    w.flush().map_err(|e| Error::file(path, e))
}

/// Writes `graphs/<id>.edges`, `graphs/<id>.truth` and
/// `clusterings/<id>.<algorithm>.clu` so every metric can be recomputed
/// from disk.
pub fn write_artifacts(output: &ExperimentOutput, dir: &Path) -> Result<()> {
    let graphs = dir.join("graphs");
    let clusterings = dir.join("clusterings");
    fs::create_dir_all(&graphs).map_err(|e| Error::file(&graphs, e))?;
    fs::create_dir_all(&clusterings).map_err(|e| Error::file(&clusterings, e))?;
    for (id, gold) in &output.graphs {
        if let Ok(gold) = gold {
            write_with(&graphs.join(format!("{id}.edges")), |w| {
                write_edge_list(&gold.graph, w)
            })?;
            write_with(&graphs.join(format!("{id}.truth")), |w| {
                write_clustering(&gold.truth, w)
            })?;
        }
    }
    for (record, clustering) in output.records.iter().zip(&output.clusterings) {
        if let Some(c) = clustering {
            let path = clusterings.join(format!(
                "{}.{}.clu",
                record.graph_id,
                record.algorithm.token()
            ));
            write_with(&path, |w| write_clustering(c, w))?;
        }
    }
    Ok(())
}
