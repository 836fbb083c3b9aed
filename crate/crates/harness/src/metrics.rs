//! Per-chain summary metrics, computed from a trace.

use std::collections::BTreeMap;

use geomc::diagnostics::{ess, esjd_from_jumps, ks_random_projections, msjd_from_jumps, split_chain, SampleSet};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};
use crate::trace::ChainTrace;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainMetrics {
    pub n_steps: usize,
    pub dim: usize,
    pub acceptance_rate: f64,
    pub mean_accept_prob: f64,
    pub esjd: f64,
    pub msjd: f64,
    /// Split-chain ESS per coordinate; `null` when the chain is too short or
    /// a coordinate never moves.
    pub ess: Option<Vec<f64>>,
    pub min_ess: Option<f64>,
    /// Wall time of the sampling loop in seconds; absent when recomputed
    /// offline.
    pub wall_time_sec: Option<f64>,
    pub min_ess_per_sec: Option<f64>,
    /// Steps taken per branch `k`.
    pub branch_histogram: BTreeMap<usize, usize>,
    /// KS statistics over random projections against a reference sample.
    pub ks: Option<Vec<f64>>,
}

impl ChainMetrics {
    pub fn from_trace(trace: &ChainTrace, wall_time_sec: Option<f64>) -> Result<Self> {
        let n = trace.records.len();
        if n == 0 {
            return Err(HarnessError::schema("trace", "no records"));
        }
        let jumps: Vec<f64> = trace.records.iter().map(|r| r.sq_jump).collect();
        let accepted = trace.records.iter().filter(|r| r.accepted).count();
        let mean_accept_prob = trace.records.iter().map(|r| r.accept_prob).sum::<f64>() / n as f64;
        let mut branch_histogram = BTreeMap::new();
        for r in &trace.records {
            *branch_histogram.entry(r.branch).or_insert(0) += 1;
        }
        let chain = SampleSet::from_rows(&trace.states())?;
        let report = ess(&split_chain(&chain)).ok();
        let min_ess = report.as_ref().map(|r| r.min_ess);
        let min_ess_per_sec = match (min_ess, wall_time_sec) {
            (Some(e), Some(t)) if t > 0.0 => Some(e / t),
            _ => None,
        };
        Ok(Self {
            n_steps: n,
            dim: trace.dim,
            acceptance_rate: accepted as f64 / n as f64,
            mean_accept_prob,
            esjd: esjd_from_jumps(&jumps)?,
            msjd: msjd_from_jumps(&jumps)?,
            ess: report.map(|r| r.per_parameter_ess),
            min_ess,
            wall_time_sec,
            min_ess_per_sec,
            branch_histogram,
            ks: None,
        })
    }

    /// Adds KS statistics of the chain against `reference`.
    pub fn with_ks<R: Rng + ?Sized>(
        mut self,
        trace: &ChainTrace,
        reference: &SampleSet,
        n_projections: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let chain = SampleSet::from_rows(&trace.states())?;
        self.ks = Some(ks_random_projections(&chain, reference, n_projections, rng)?);
        Ok(self)
    }

    /// Equality ignoring the wall-clock fields.
    pub fn eq_ignoring_timing(&self, other: &Self) -> bool {
        let strip = |m: &Self| Self {
            wall_time_sec: None,
            min_ess_per_sec: None,
            ..m.clone()
        };
        strip(self) == strip(other)
    }
}
