//! Convergence and efficiency diagnostics.

use nalgebra::{DMatrix, DVector};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::hamiltonian::standard_normal;
use crate::kernels::KernelOutcome;

/// Above this many rows the bandwidth is computed on a seeded subsample.
pub const BANDWIDTH_MAX_POINTS: usize = 4096;
const BANDWIDTH_SUBSAMPLE_SEED: u64 = 0x6d6d_645f_6277;

/// Samples stored one per row.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    rows: DMatrix<f64>,
}

impl SampleSet {
    pub fn new(rows: DMatrix<f64>) -> Self {
        Self { rows }
    }

    pub fn from_rows(points: &[DVector<f64>]) -> Result<Self> {
        let m = points.first().map_or(0, |p| p.len());
        if let Some(bad) = points.iter().find(|p| p.len() != m) {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: bad.len(),
            });
        }
        Ok(Self {
            rows: DMatrix::from_fn(points.len(), m, |i, j| points[i][j]),
        })
    }

    pub fn n(&self) -> usize {
        self.rows.nrows()
    }

    pub fn dim(&self) -> usize {
        self.rows.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.rows
    }

    pub fn row(&self, i: usize) -> DVector<f64> {
        self.rows.row(i).transpose()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.column(j).iter().copied().collect()
    }

    fn sq_dist(&self, i: usize, other: &SampleSet, j: usize) -> f64 {
        (0..self.dim())
            .map(|c| {
                let d = self.rows[(i, c)] - other.rows[(j, c)];
                d * d
            })
            .sum()
    }
}

/// How the median heuristic turns pairwise distances into a bandwidth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BandwidthMode {
    /// Median of squared distances.
    #[default]
    Squared,
    /// Median of distances.
    Unsquared,
}

impl BandwidthMode {
    pub fn name(&self) -> &'static str {
        match self {
            BandwidthMode::Squared => "squared",
            BandwidthMode::Unsquared => "unsquared",
        }
    }
}

impl std::str::FromStr for BandwidthMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "squared" => Ok(BandwidthMode::Squared),
            "unsquared" => Ok(BandwidthMode::Unsquared),
            other => Err(Error::InvalidArgument(format!("unknown bandwidth mode '{other}'"))),
        }
    }
}

/// Lower median: the order statistic `⌈n/2⌉`.
pub fn lower_median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let k = (values.len() - 1) / 2;
    let (_, m, _) = values.select_nth_unstable_by(k, |a, b| a.total_cmp(b));
    Some(*m)
}

/// Median heuristic bandwidth over all pairs of rows.
pub fn median_bandwidth(x: &SampleSet, mode: BandwidthMode) -> Result<f64> {
    if x.n() < 2 {
        return Err(Error::InvalidArgument("bandwidth needs at least two points".into()));
    }
    let idx: Vec<usize> = if x.n() > BANDWIDTH_MAX_POINTS {
        let mut rng = ChaCha8Rng::seed_from_u64(BANDWIDTH_SUBSAMPLE_SEED);
        let mut v = sample(&mut rng, x.n(), BANDWIDTH_MAX_POINTS).into_vec();
        v.sort_unstable();
        v
    } else {
        (0..x.n()).collect()
    };
    let mut d = Vec::with_capacity(idx.len() * (idx.len() - 1) / 2);
    for (a, &i) in idx.iter().enumerate() {
        for &j in &idx[a + 1..] {
            d.push(x.sq_dist(i, x, j));
        }
    }
    let med = lower_median(&mut d).expect("at least one pair");
    let h = match mode {
        BandwidthMode::Squared => med,
        BandwidthMode::Unsquared => med.sqrt(),
    };
    if h == 0.0 {
        return Err(Error::DegenerateSet);
    }
    Ok(h)
}

fn gaussian_kernel(sq: f64, h: f64) -> f64 {
    (-sq / (2.0 * h)).exp()
}

/// `1/(r(r−1)) Σ_{i≠j} k(xᵢ, xⱼ)`.
pub fn kernel_mean_within(x: &SampleSet, h: f64) -> f64 {
    let r = x.n();
    let mut acc = 0.0;
    for i in 0..r {
        for j in i + 1..r {
            acc += gaussian_kernel(x.sq_dist(i, x, j), h);
        }
    }
    2.0 * acc / (r * (r - 1)) as f64
}

/// `1/(rs) Σᵢⱼ k(xᵢ, yⱼ)`.
pub fn kernel_mean_between(x: &SampleSet, y: &SampleSet, h: f64) -> f64 {
    let mut acc = 0.0;
    for i in 0..x.n() {
        for j in 0..y.n() {
            acc += gaussian_kernel(x.sq_dist(i, y, j), h);
        }
    }
    acc / (x.n() * y.n()) as f64
}

/// Unbiased squared MMD with kernel `exp(−‖q − q′‖²/2h)`. May be negative.
pub fn mmd_unbiased(x: &SampleSet, y: &SampleSet, h: f64) -> Result<f64> {
    check_pair(x, y)?;
    if !(h > 0.0) {
        return Err(Error::InvalidArgument("bandwidth must be positive".into()));
    }
    Ok(kernel_mean_within(x, h) + kernel_mean_within(y, h) - 2.0 * kernel_mean_between(x, y, h))
}

fn check_pair(x: &SampleSet, y: &SampleSet) -> Result<()> {
    if x.n() < 2 || y.n() < 2 {
        return Err(Error::InvalidArgument("two-sample statistics need at least two points per set".into()));
    }
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    Ok(())
}

/// Mean of `α·‖q_prop − q‖²` over the given per-step values.
pub fn esjd_from_jumps(jumps: &[f64]) -> Result<f64> {
    if jumps.is_empty() {
        return Err(Error::InvalidArgument("no transitions".into()));
    }
    Ok(jumps.iter().sum::<f64>() / jumps.len() as f64)
}

/// Lower median of `α·‖q_prop − q‖²`.
pub fn msjd_from_jumps(jumps: &[f64]) -> Result<f64> {
    let mut v = jumps.to_vec();
    lower_median(&mut v).ok_or_else(|| Error::InvalidArgument("no transitions".into()))
}

pub fn esjd(outcomes: &[KernelOutcome]) -> Result<f64> {
    esjd_from_jumps(&outcomes.iter().map(|o| o.sq_jump).collect::<Vec<_>>())
}

pub fn msjd(outcomes: &[KernelOutcome]) -> Result<f64> {
    msjd_from_jumps(&outcomes.iter().map(|o| o.sq_jump).collect::<Vec<_>>())
}

/// Splits one chain into two halves, dropping the middle draw when the length
/// is odd.
pub fn split_chain(chain: &SampleSet) -> [SampleSet; 2] {
    let n = chain.n();
    let half = n / 2;
    let first = chain.rows.rows(0, half).into_owned();
    let second = chain.rows.rows(n - half, half).into_owned();
    [SampleSet::new(first), SampleSet::new(second)]
}

#[derive(Debug, Clone, PartialEq)]
pub struct EssReport {
    pub per_parameter_ess: Vec<f64>,
    pub min_ess: f64,
    pub tau_hat: Vec<f64>,
    /// Index `r` of the last autocorrelation pair included in `τ̂`.
    pub truncation_lag: Vec<usize>,
}

/// Biased autocovariances `(1/n) Σ (xₜ − x̄)(xₜ₊ₖ − x̄)` for `k = 0..n`.
fn autocovariance(x: &[f64], planner: &mut FftPlanner<f64>) -> Vec<f64> {
    let n = x.len();
    let mean = x.iter().sum::<f64>() / n as f64;
    let len = (2 * n).next_power_of_two();
    let mut buf: Vec<Complex<f64>> = x
        .iter()
        .map(|v| Complex::new(v - mean, 0.0))
        .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
        .take(len)
        .collect();
    planner.plan_fft_forward(len).process(&mut buf);
    for c in buf.iter_mut() {
        *c = Complex::new(c.norm_sqr(), 0.0);
    }
    planner.plan_fft_inverse(len).process(&mut buf);
    buf[..n].iter().map(|c| c.re / (len * n) as f64).collect()
}

/// Multi-chain effective sample size `pn/τ̂` per parameter.
pub fn ess(chains: &[SampleSet]) -> Result<EssReport> {
    let p = chains.len();
    if p < 2 {
        return Err(Error::InvalidArgument("ess needs at least two chains".into()));
    }
    let n = chains[0].n();
    let m = chains[0].dim();
    if n < 8 {
        return Err(Error::InvalidArgument("ess needs at least 8 draws per chain".into()));
    }
    for c in chains {
        if c.n() != n {
            return Err(Error::DimensionMismatch { expected: n, found: c.n() });
        }
        if c.dim() != m {
            return Err(Error::DimensionMismatch { expected: m, found: c.dim() });
        }
    }
    let mut planner = FftPlanner::new();
    let nf = n as f64;
    let mut report = EssReport {
        per_parameter_ess: Vec::with_capacity(m),
        min_ess: f64::INFINITY,
        tau_hat: Vec::with_capacity(m),
        truncation_lag: Vec::with_capacity(m),
    };
    for j in 0..m {
        let mut acov_mean = vec![0.0; n];
        let mut means = Vec::with_capacity(p);
        let mut w = 0.0;
        for c in chains {
            let col = c.column(j);
            let acov = autocovariance(&col, &mut planner);
            for (a, v) in acov_mean.iter_mut().zip(&acov) {
                *a += v / p as f64;
            }
            w += acov[0] * nf / (nf - 1.0) / p as f64;
            means.push(col.iter().sum::<f64>() / nf);
        }
        let grand = means.iter().sum::<f64>() / p as f64;
        let b = nf / (p as f64 - 1.0) * means.iter().map(|x| (x - grand).powi(2)).sum::<f64>();
        let var_plus = ((nf - 1.0) * w + b) / nf;
        if !(var_plus > 0.0) || !(w > 0.0) {
            return Err(Error::ZeroVariance(j));
        }
        let rho = |k: usize| -> f64 {
            if k == 0 {
                1.0
            } else if k < n {
                1.0 - (w - acov_mean[k]) / var_plus
            } else {
                0.0
            }
        };
        let mut sum = rho(0) + rho(1);
        let mut r = 0;
        loop {
            let next = 2 * (r + 1);
            if next + 1 >= n {
                break;
            }
            let pair = rho(next) + rho(next + 1);
            if pair <= 0.0 {
                break;
            }
            sum += pair;
            r += 1;
        }
        let tau = -1.0 + 2.0 * sum;
        let e = p as f64 * nf / tau;
        report.min_ess = report.min_ess.min(e);
        report.per_parameter_ess.push(e);
        report.tau_hat.push(tau);
        report.truncation_lag.push(r);
    }
    Ok(report)
}

/// Two-sample Kolmogorov–Smirnov statistic `sup |F̂₁ − F̂₂|`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let t = a[i].min(b[j]);
        while i < a.len() && a[i] <= t {
            i += 1;
        }
        while j < b.len() && b[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// KS statistics of the projections onto `n_proj` random unit directions.
pub fn ks_random_projections<R: Rng + ?Sized>(
    x: &SampleSet,
    y: &SampleSet,
    n_proj: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if n_proj == 0 {
        return Err(Error::InvalidArgument("n_proj must be at least 1".into()));
    }
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    let mut out = Vec::with_capacity(n_proj);
    for _ in 0..n_proj {
        let mut u = standard_normal(x.dim(), rng);
        while u.norm() == 0.0 {
            u = standard_normal(x.dim(), rng);
        }
        u /= u.norm();
        let px: Vec<f64> = (x.matrix() * &u).iter().copied().collect();
        let py: Vec<f64> = (y.matrix() * &u).iter().copied().collect();
        out.push(ks_two_sample(&px, &py));
    }
    Ok(out)
}
