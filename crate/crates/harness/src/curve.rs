//! Convergence curves: `|MMD²ᵤ|` between the ensemble's n-th states and an
//! i.i.d. reference sample, for every step n.

use std::path::Path;

use geomc::chain_rng;
use geomc::diagnostics::{kernel_mean_between, kernel_mean_within, median_bandwidth, BandwidthMode, SampleSet};
use nalgebra::DVector;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};
use crate::model::Sampler;
use crate::run::{reference_draws, thread_pool, write_json};
use crate::trace::fmt_f64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSummary {
    pub kernel: String,
    pub alpha1: f64,
    pub step_size: f64,
    pub n_chains: usize,
    pub n_reference: usize,
    pub n_steps: usize,
    pub bandwidth: f64,
    pub bandwidth_mode: String,
    /// Least-squares slope of `ln |MMD²ᵤ|` against the step index.
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    pub r_squared: Option<f64>,
    pub final_value: f64,
}

#[derive(Debug, Clone)]
pub struct MmdCurve {
    pub steps: Vec<usize>,
    /// Signed unbiased estimates; the CSV holds their absolute values.
    pub values: Vec<f64>,
    pub summary: CurveSummary,
}

/// Unbiased MMD² of each snapshot against one reference set with a fixed
/// bandwidth.
pub fn curve_from_snapshots(snapshots: &[SampleSet], reference: &SampleSet, h: f64) -> Result<Vec<f64>> {
    if reference.n() < 2 {
        return Err(HarnessError::validation("n_reference", "n_reference must be ≥ 2"));
    }
    if !(h > 0.0) {
        return Err(HarnessError::validation("bandwidth", "must be > 0"));
    }
    for s in snapshots {
        if s.n() < 2 {
            return Err(HarnessError::validation("n_chains", "n_chains must be ≥ 2 for an MMD curve"));
        }
        if s.dim() != reference.dim() {
            return Err(geomc::Error::DimensionMismatch {
                expected: reference.dim(),
                found: s.dim(),
            }
            .into());
        }
    }
    let within_ref = kernel_mean_within(reference, h);
    Ok(snapshots
        .par_iter()
        .map(|x| kernel_mean_within(x, h) + within_ref - 2.0 * kernel_mean_between(x, reference, h))
        .collect())
}

/// Least-squares fit of `ln y = a + b·x` over entries with `y > 0`; returns
/// `(b, a, R²)`.
pub fn log_linear_fit(x: &[f64], y: &[f64]) -> Option<(f64, f64, f64)> {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(_, y)| **y > 0.0 && y.is_finite())
        .map(|(x, y)| (*x, y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let b = sxy / sxx;
    let a = my - b * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some((b, a, r2))
}

/// Runs `n_chains` chains from the shared initial point and scores every
/// step against `n_reference` reference draws.
pub fn mmd_curve(cfg: &ExperimentConfig) -> Result<MmdCurve> {
    cfg.validate_for_curve()?;
    let sampler = Sampler::from_config(cfg)?;
    let reference = SampleSet::from_rows(&reference_draws(cfg, &sampler)?)?;
    let mode: BandwidthMode = cfg.bandwidth.into();
    let h = median_bandwidth(&reference, mode)?;

    let pool = thread_pool(cfg.n_workers)?;
    let values = pool.install(|| -> Result<_> {
        let paths = (0..cfg.n_chains as u64)
            .into_par_iter()
            .map(|c| {
                let mut rng = chain_rng(cfg.base_seed, c);
                let mut q = sampler.initial_point().clone();
                let mut path = Vec::with_capacity(cfg.n_steps);
                for _ in 0..cfg.n_steps {
                    sampler.step(&mut q, &mut rng)?;
                    path.push(q.clone());
                }
                Ok(path)
            })
            .collect::<Result<Vec<Vec<DVector<f64>>>>>()?;
        let snapshots = (0..cfg.n_steps)
            .map(|n| {
                let rows: Vec<DVector<f64>> = paths.iter().map(|p| p[n].clone()).collect();
                SampleSet::from_rows(&rows)
            })
            .collect::<geomc::Result<Vec<_>>>()?;
        curve_from_snapshots(&snapshots, &reference, h)
    })?;

    let steps: Vec<usize> = (1..=cfg.n_steps).collect();
    let xs: Vec<f64> = steps.iter().map(|&s| s as f64).collect();
    let abs: Vec<f64> = values.iter().map(|v| v.abs()).collect();
    let fit = log_linear_fit(&xs, &abs);
    let summary = CurveSummary {
        kernel: cfg.kernel.name().to_string(),
        alpha1: cfg.alpha1,
        step_size: cfg.step_size,
        n_chains: cfg.n_chains,
        n_reference: cfg.n_reference,
        n_steps: cfg.n_steps,
        bandwidth: h,
        bandwidth_mode: mode.name().to_string(),
        slope: fit.map(|f| f.0),
        intercept: fit.map(|f| f.1),
        r_squared: fit.map(|f| f.2),
        final_value: *abs.last().expect("n_steps ≥ 1"),
    };
    Ok(MmdCurve { steps, values, summary })
}

impl MmdCurve {
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["step", "mmd_u2_abs"])?;
        for (s, v) in self.steps.iter().zip(&self.values) {
            w.write_record([s.to_string(), fmt_f64(v.abs())])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Writes `curve.csv` and `curve_summary.json` into `dir`.
    pub fn save(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        self.write_csv(&dir.join("curve.csv"))?;
        write_json(&dir.join("curve_summary.json"), &self.summary)
    }
}

pub fn read_curve_csv(path: &Path) -> Result<Vec<(usize, f64)>> {
    let name = path.display().to_string();
    let mut rdr = csv::Reader::from_path(path)?;
    let cols = rdr.headers().map_err(|e| HarnessError::schema(&name, e.to_string()))?;
    if cols.iter().collect::<Vec<_>>() != ["step", "mmd_u2_abs"] {
        return Err(HarnessError::schema(&name, "expected columns step,mmd_u2_abs"));
    }
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| HarnessError::schema(&name, e.to_string()))?;
        let step = rec[0].parse().map_err(|_| HarnessError::schema(&name, "bad step"))?;
        let v = rec[1].parse().map_err(|_| HarnessError::schema(&name, "bad mmd_u2_abs"))?;
        out.push((step, v));
    }
    Ok(out)
}
