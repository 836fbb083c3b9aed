//! Chain ensembles, reference draws and offline diagnosis.

use std::path::{Path, PathBuf};
use std::time::Instant;

use geomc::chain_rng;
use geomc::diagnostics::SampleSet;
use nalgebra::DVector;
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};
use crate::metrics::ChainMetrics;
use crate::model::Sampler;
use crate::trace::{fmt_f64, ChainTrace, TraceHeader, TraceRecord, VERSION};

/// RNG stream reserved for reference draws; chains use streams `0..n_chains`.
pub const REFERENCE_STREAM: u64 = u64::MAX;

pub(crate) fn thread_pool(n_workers: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = n_workers {
        b = b.num_threads(n);
    }
    b.build().map_err(|e| HarnessError::Runtime(e.to_string()))
}

#[derive(Debug, Clone)]
pub struct ChainRun {
    pub trace: ChainTrace,
    pub metrics: ChainMetrics,
}

/// Runs chain `chain` of the ensemble described by `cfg`.
pub fn run_chain(cfg: &ExperimentConfig, sampler: &Sampler, chain: u64) -> Result<ChainRun> {
    let mut rng = chain_rng(cfg.base_seed, chain);
    let mut q = sampler.initial_point().clone();
    let mut records = Vec::with_capacity(cfg.n_steps);
    let start = Instant::now();
    for step in 1..=cfg.n_steps {
        let out = sampler.step(&mut q, &mut rng)?;
        records.push(TraceRecord::from_outcome(step, &out, &q));
    }
    let wall = start.elapsed().as_secs_f64();
    let trace = ChainTrace {
        header: TraceHeader {
            version: Some(VERSION.to_string()),
            base_seed: Some(cfg.base_seed),
            chain: Some(chain),
            config: Some(cfg.to_json()),
        },
        dim: sampler.dim(),
        records,
    };
    let metrics = ChainMetrics::from_trace(&trace, Some(wall))?;
    Ok(ChainRun { trace, metrics })
}

pub fn trace_path(dir: &Path, chain: u64) -> PathBuf {
    dir.join(format!("trace_{chain:03}.csv"))
}

pub fn metrics_path(dir: &Path, chain: u64) -> PathBuf {
    dir.join(format!("metrics_{chain:03}.json"))
}

/// Runs every chain and writes `trace_NNN.csv` and `metrics_NNN.json` into
/// the output directory.
pub fn run(cfg: &ExperimentConfig) -> Result<Vec<ChainRun>> {
    cfg.validate()?;
    let sampler = Sampler::from_config(cfg)?;
    let pool = thread_pool(cfg.n_workers)?;
    let runs = pool.install(|| {
        (0..cfg.n_chains as u64)
            .into_par_iter()
            .map(|c| run_chain(cfg, &sampler, c))
            .collect::<Result<Vec<_>>>()
    })?;
    std::fs::create_dir_all(&cfg.output_dir)?;
    for (c, r) in runs.iter().enumerate() {
        r.trace.save(&trace_path(&cfg.output_dir, c as u64))?;
        write_json(&metrics_path(&cfg.output_dir, c as u64), &r.metrics)?;
    }
    Ok(runs)
}

pub(crate) fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// `n_reference` i.i.d. target draws from the reserved stream.
pub fn reference_draws(cfg: &ExperimentConfig, sampler: &Sampler) -> Result<Vec<DVector<f64>>> {
    if !sampler.has_reference_sampler() {
        return Err(HarnessError::MissingReferenceSampler(cfg.target.name().to_string()));
    }
    let mut rng = chain_rng(cfg.base_seed, REFERENCE_STREAM);
    (0..cfg.n_reference)
        .map(|_| {
            sampler
                .reference_sample(&mut rng)
                .ok_or_else(|| HarnessError::MissingReferenceSampler(cfg.target.name().to_string()))
        })
        .collect()
}

pub fn write_reference_csv(path: &Path, draws: &[DVector<f64>]) -> Result<()> {
    let dim = draws.first().map_or(0, |d| d.len());
    let mut w = csv::Writer::from_path(path)?;
    w.write_record((0..dim).map(|j| format!("q{j}")))?;
    for d in draws {
        w.write_record(d.iter().map(|&x| fmt_f64(x)))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_reference_csv(path: &Path) -> Result<SampleSet> {
    let name = path.display().to_string();
    let mut rdr = csv::Reader::from_path(path)?;
    let cols: Vec<String> = rdr
        .headers()
        .map_err(|e| HarnessError::schema(&name, e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let dim = cols.len();
    if dim == 0 || cols.iter().enumerate().any(|(j, c)| *c != format!("q{j}")) {
        return Err(HarnessError::schema(&name, "expected columns q0,…,q{m-1}"));
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| HarnessError::schema(&name, e.to_string()))?;
        let v = rec
            .iter()
            .map(|s| s.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| HarnessError::schema(&name, format!("record {}: not a number", i + 1)))?;
        rows.push(DVector::from_vec(v));
    }
    if rows.len() < 2 {
        return Err(HarnessError::schema(&name, "reference needs at least two rows"));
    }
    Ok(SampleSet::from_rows(&rows)?)
}

/// Writes `reference.csv` into the output directory.
pub fn reference(cfg: &ExperimentConfig) -> Result<PathBuf> {
    cfg.validate()?;
    let sampler = Sampler::from_config(cfg)?;
    let draws = reference_draws(cfg, &sampler)?;
    std::fs::create_dir_all(&cfg.output_dir)?;
    let path = cfg.output_dir.join("reference.csv");
    write_reference_csv(&path, &draws)?;
    Ok(path)
}

/// Recomputes metrics from trace files, adding KS statistics when a
/// reference sample is given. All traces must share a dimension.
pub fn diagnose(
    traces: &[PathBuf],
    reference: Option<&Path>,
    n_projections: usize,
    seed: u64,
) -> Result<Vec<ChainMetrics>> {
    if traces.is_empty() {
        return Err(HarnessError::validation("traces", "at least one trace file is required"));
    }
    let loaded = traces
        .iter()
        .map(|p| ChainTrace::load(p))
        .collect::<Result<Vec<_>>>()?;
    let dim = loaded[0].dim;
    if let Some((p, t)) = traces.iter().zip(&loaded).find(|(_, t)| t.dim != dim) {
        return Err(HarnessError::schema(
            p.display(),
            format!("dimension {} differs from {dim}", t.dim),
        ));
    }
    let reference = match reference {
        Some(path) => {
            let r = read_reference_csv(path)?;
            if r.dim() != dim {
                return Err(HarnessError::schema(
                    path.display(),
                    format!("dimension {} differs from the traces ({dim})", r.dim()),
                ));
            }
            Some(r)
        }
        None => None,
    };
    loaded
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let m = ChainMetrics::from_trace(t, None)?;
            match &reference {
                Some(r) => m.with_ks(t, r, n_projections, &mut chain_rng(seed, i as u64)),
                None => Ok(m),
            }
        })
        .collect()
}
