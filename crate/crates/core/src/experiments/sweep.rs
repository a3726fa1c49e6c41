use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, Observable};
use crate::analysis::{crosses, degree_tail, DEFAULT_TAIL_FRACTION};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::model::ModelSpec;
use crate::rng::{derive_stream, purpose, RngStream};
use crate::stats;

/// One row of a sweep: one observable of one replicate at one grid point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub params: BTreeMap<String, String>,
    pub grid_index: usize,
    pub replicate: usize,
    pub seed: u64,
    pub stream: u64,
    pub observable: Observable,
    /// `None` when the value is not available.
    pub value: Option<f64>,
    pub walltime_ms: Option<f64>,
    pub error: Option<String>,
}

impl ResultRecord {
    /// The stream that generated this row's graph.
    pub fn rng(&self) -> RngStream {
        RngStream::new(self.seed, self.stream)
    }
}

#[derive(Clone, Debug)]
pub struct SweepOutput {
    pub records: Vec<ResultRecord>,
    pub csv_path: PathBuf,
    pub summary_path: PathBuf,
}

/// Evaluates `observable` on a graph sampled from `spec` at `rng`.
pub fn evaluate(
    observable: Observable,
    spec: &ModelSpec,
    g: &Graph,
    rng: RngStream,
) -> Result<f64> {
    Ok(match observable {
        Observable::Nodes => g.num_nodes() as f64,
        Observable::Edges => g.num_edges() as f64,
        Observable::MeanDegree => {
            stats::mean(&g.degrees().iter().map(|&k| k as f64).collect::<Vec<_>>())
        }
        Observable::MaxDegree => g.degrees().into_iter().max().unwrap_or(0) as f64,
        Observable::Components => g.components().num_components() as f64,
        Observable::LargestSize => g.components().largest_size() as f64,
        Observable::LargestFraction => {
            if g.num_nodes() == 0 {
                return Err(Error::Degenerate("empty graph".into()));
            }
            g.components().largest_size() as f64 / g.num_nodes() as f64
        }
        Observable::Clustering => g.clustering_coefficient(),
        Observable::Crossing => {
            let lattice = spec
                .lattice()
                .ok_or_else(|| Error::Unsupported(format!("crossing on model {}", spec.name())))?;
            crosses(g, lattice) as u8 as f64
        }
        Observable::TailTau => {
            degree_tail(g, DEFAULT_TAIL_FRACTION, rng.substream(purpose::ANALYSIS))?.tau_hat
        }
    })
}

/// Runs every (grid point, replicate) task on the rayon pool and writes
/// `<out>.csv` and `<out>.summary.json` through temporary files.
///
/// Replicate `r` of grid point `i` uses stream `derive_stream(seed, i, r)`.
/// A grid point whose parameters are invalid yields NA rows carrying the
/// error, as does an observable that fails on a particular graph.
pub fn run_sweep(config: &ExperimentConfig) -> Result<SweepOutput> {
    config.validate()?;
    let records = sweep_records(config);
    let csv_path = with_suffix(&config.out, ".csv");
    let summary_path = with_suffix(&config.out, ".summary.json");
    if let Some(dir) = csv_path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut csv = Vec::new();
    write_csv(config, &records, &mut csv)?;
    write_atomic(&csv_path, &csv)?;
    let summary = serde_json::to_vec_pretty(&summarize(config, &records))?;
    write_atomic(&summary_path, &summary)?;
    Ok(SweepOutput {
        records,
        csv_path,
        summary_path,
    })
}

/// The records of a sweep in canonical order, without writing anything.
pub fn sweep_records(config: &ExperimentConfig) -> Vec<ResultRecord> {
    let tasks: Vec<(usize, usize)> = (0..config.num_points())
        .flat_map(|i| (0..config.replicates).map(move |r| (i, r)))
        .collect();
    let mut records: Vec<ResultRecord> = tasks
        .into_par_iter()
        .flat_map_iter(|(i, r)| run_task(config, i, r))
        .collect();
    records.sort_by_key(|rec| {
        let obs = config.observables.iter().position(|&o| o == rec.observable);
        (rec.grid_index, rec.replicate, obs)
    });
    records
}

fn run_task(config: &ExperimentConfig, grid_index: usize, replicate: usize) -> Vec<ResultRecord> {
    let params = config.point(grid_index);
    let stream = derive_stream(config.seed, grid_index as u64, replicate as u64);
    let rng = RngStream::new(config.seed, stream);
    let row = |observable, value, walltime_ms, error| ResultRecord {
        params: params.clone(),
        grid_index,
        replicate,
        seed: config.seed,
        stream,
        observable,
        value,
        walltime_ms,
        error,
    };
    let start = Instant::now();
    let sampled =
        ModelSpec::from_params(&params).and_then(|spec| spec.sample(rng).map(|g| (spec, g)));
    let (spec, g) = match sampled {
        Ok(x) => x,
        Err(e) => {
            return config
                .observables
                .iter()
                .map(|&o| row(o, None, None, Some(e.to_string())))
                .collect()
        }
    };
    let sample_ms = start.elapsed().as_secs_f64() * 1e3;
    config
        .observables
        .iter()
        .map(|&o| {
            let t = Instant::now();
            let result = evaluate(o, &spec, &g, rng);
            let ms = config
                .timing
                .then(|| sample_ms + t.elapsed().as_secs_f64() * 1e3);
            match result {
                Ok(v) if v.is_finite() => row(o, Some(v), ms, None),
                Ok(v) => row(o, None, ms, Some(format!("non-finite value {v}"))),
                Err(e) => row(o, None, ms, Some(e.to_string())),
            }
        })
        .collect()
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Writes `bytes` next to `path` and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = with_suffix(path, ".tmp");
    let result = (|| -> std::io::Result<()> {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}

/// CSV columns: parameters (alphabetical), `seed`, `stream`, `observable`,
/// `value`, `walltime_ms`, `error`. Missing values are empty fields.
pub fn write_csv<W: Write>(
    config: &ExperimentConfig,
    records: &[ResultRecord],
    out: W,
) -> Result<()> {
    let cols = config.param_columns();
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = cols.iter().map(String::as_str).collect();
    header.extend([
        "seed",
        "stream",
        "observable",
        "value",
        "walltime_ms",
        "error",
    ]);
    w.write_record(&header)?;
    for rec in records {
        let mut fields: Vec<String> = cols
            .iter()
            .map(|c| rec.params.get(c).cloned().unwrap_or_default())
            .collect();
        fields.push(rec.seed.to_string());
        fields.push(rec.stream.to_string());
        fields.push(rec.observable.name().to_string());
        fields.push(rec.value.map(|v| v.to_string()).unwrap_or_default());
        fields.push(
            rec.walltime_ms
                .map(|v| format!("{v:.3}"))
                .unwrap_or_default(),
        );
        fields.push(rec.error.clone().unwrap_or_default());
        w.write_record(&fields)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub grid_index: usize,
    pub params: BTreeMap<String, String>,
    pub observable: Observable,
    pub count: usize,
    pub na: usize,
    pub mean: Option<f64>,
    pub std_dev: Option<f64>,
    pub min: Option<f64>,
    pub max: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub config: BTreeMap<String, String>,
    pub rows: usize,
    pub grid_points: usize,
    pub aggregates: Vec<Aggregate>,
}

pub fn summarize(config: &ExperimentConfig, records: &[ResultRecord]) -> SweepSummary {
    let mut groups: BTreeMap<(usize, usize), Vec<&ResultRecord>> = BTreeMap::new();
    for rec in records {
        let obs = config
            .observables
            .iter()
            .position(|&o| o == rec.observable)
            .unwrap_or(usize::MAX);
        groups.entry((rec.grid_index, obs)).or_default().push(rec);
    }
    let aggregates = groups
        .into_values()
        .map(|rows| {
            let values: Vec<f64> = rows.iter().filter_map(|r| r.value).collect();
            let some = |v: f64| (!values.is_empty()).then_some(v);
            Aggregate {
                grid_index: rows[0].grid_index,
                params: rows[0].params.clone(),
                observable: rows[0].observable,
                count: values.len(),
                na: rows.len() - values.len(),
                mean: some(stats::mean(&values)),
                std_dev: some(stats::std_dev(&values)),
                min: some(values.iter().copied().fold(f64::INFINITY, f64::min)),
                max: some(values.iter().copied().fold(f64::NEG_INFINITY, f64::max)),
            }
        })
        .collect();
    SweepSummary {
        config: config.to_map(),
        rows: records.len(),
        grid_points: config.num_points(),
        aggregates,
    }
}
