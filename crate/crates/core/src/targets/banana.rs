use std::sync::OnceLock;

use nalgebra::DVector;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{MetricPolicy, Target};
use crate::error::{Error, Result};
use crate::geometry::{MetricOrder, MetricTerms};
use crate::linalg::SymMatrix;

/// Cells per axis of the reference-sampling grid.
pub const BANANA_GRID_SIZE: usize = 2048;

/// Grid half-width in units of `σ_θ`.
const GRID_HALF_WIDTH: f64 = 6.0;

/// Observations for the banana posterior.
#[derive(Debug, Clone)]
pub enum BananaData {
    Observed(Vec<f64>),
    /// `N` draws of `N(1, σ_y²)`, i.e. generated with `θ₁ + θ₂² = 1`.
    Generated { seed: u64 },
}

/// Posterior of `(θ₁, θ₂)` under `y ~ N(θ₁ + θ₂², σ_y²)`, `θ ~ N(0, σ_θ² I)`.
#[derive(Debug)]
pub struct Banana {
    y: Vec<f64>,
    sum_y: f64,
    sum_y2: f64,
    sigma_y: f64,
    sigma_theta: f64,
    grid: OnceLock<Grid>,
}

impl Clone for Banana {
    fn clone(&self) -> Self {
        Self {
            y: self.y.clone(),
            sum_y: self.sum_y,
            sum_y2: self.sum_y2,
            sigma_y: self.sigma_y,
            sigma_theta: self.sigma_theta,
            grid: OnceLock::new(),
        }
    }
}

#[derive(Debug)]
struct Grid {
    lo: f64,
    cell: f64,
    cdf: Vec<f64>,
}

pub fn make_banana(n: usize, sigma_y: f64, sigma_theta: f64, data: BananaData) -> Result<Banana> {
    if n == 0 {
        return Err(Error::InvalidArgument("banana needs N >= 1".into()));
    }
    if !(sigma_y > 0.0) || !(sigma_theta > 0.0) {
        return Err(Error::InvalidArgument("banana scales must be positive".into()));
    }
    let y = match data {
        BananaData::Observed(y) => {
            if y.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: y.len(),
                });
            }
            y
        }
        BananaData::Generated { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..n)
                .map(|_| 1.0 + sigma_y * rng.sample::<f64, _>(StandardNormal))
                .collect()
        }
    };
    Ok(Banana {
        sum_y: y.iter().sum(),
        sum_y2: y.iter().map(|v| v * v).sum(),
        y,
        sigma_y,
        sigma_theta,
        grid: OnceLock::new(),
    })
}

impl Banana {
    pub fn observations(&self) -> &[f64] {
        &self.y
    }

    pub fn sigma_y(&self) -> f64 {
        self.sigma_y
    }

    pub fn sigma_theta(&self) -> f64 {
        self.sigma_theta
    }

    fn n(&self) -> f64 {
        self.y.len() as f64
    }

    /// Log-density via sufficient statistics; used on the reference grid.
    fn fast_log_density(&self, t1: f64, t2: f64) -> f64 {
        let mu = t1 + t2 * t2;
        let sse = self.sum_y2 - 2.0 * mu * self.sum_y + self.n() * mu * mu;
        -(t1 * t1 + t2 * t2) / (2.0 * self.sigma_theta.powi(2)) - sse / (2.0 * self.sigma_y.powi(2))
    }

    fn grid(&self) -> &Grid {
        self.grid.get_or_init(|| {
            let k = BANANA_GRID_SIZE;
            let lo = -GRID_HALF_WIDTH * self.sigma_theta;
            let cell = 2.0 * GRID_HALF_WIDTH * self.sigma_theta / k as f64;
            let centre = |i: usize| lo + (i as f64 + 0.5) * cell;
            let mut logp = Vec::with_capacity(k * k);
            for i in 0..k {
                for j in 0..k {
                    logp.push(self.fast_log_density(centre(i), centre(j)));
                }
            }
            let max = logp.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let mut acc = 0.0;
            let cdf = logp
                .into_iter()
                .map(|l| {
                    acc += (l - max).exp();
                    acc
                })
                .collect();
            Grid { lo, cell, cdf }
        })
    }
}

impl Target for Banana {
    fn dim(&self) -> usize {
        2
    }

    fn log_density(&self, q: &DVector<f64>) -> f64 {
        let mu = q[0] + q[1] * q[1];
        let sse: f64 = self.y.iter().map(|y| (y - mu) * (y - mu)).sum();
        -(q[0] * q[0] + q[1] * q[1]) / (2.0 * self.sigma_theta.powi(2))
            - sse / (2.0 * self.sigma_y.powi(2))
    }

    fn grad_log_density(&self, q: &DVector<f64>) -> DVector<f64> {
        let mu = q[0] + q[1] * q[1];
        let r = (self.sum_y - self.n() * mu) / self.sigma_y.powi(2);
        let pt = 1.0 / self.sigma_theta.powi(2);
        DVector::from_vec(vec![-q[0] * pt + r, -q[1] * pt + 2.0 * q[1] * r])
    }

    fn metric_policy(&self) -> MetricPolicy {
        MetricPolicy::FisherPlusPrior
    }

    /// `(N/σ_y²) JᵀJ + σ_θ⁻² I` with `J = [1, 2θ₂]`.
    fn metric_terms(&self, q: &DVector<f64>, order: MetricOrder) -> Result<MetricTerms> {
        let c = self.n() / self.sigma_y.powi(2);
        let pt = 1.0 / self.sigma_theta.powi(2);
        let t2 = q[1];
        let g = SymMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 0) => c + pt,
            (1, 0) => 2.0 * t2 * c,
            _ => 4.0 * t2 * t2 * c + pt,
        });
        let dg = (order == MetricOrder::WithDerivatives).then(|| {
            vec![
                SymMatrix::zeros(2),
                SymMatrix::from_fn(2, |i, j| match (i, j) {
                    (0, 0) => 0.0,
                    (1, 0) => 2.0 * c,
                    _ => 8.0 * t2 * c,
                }),
            ]
        });
        Ok(MetricTerms { g, dg })
    }

    fn has_reference_sampler(&self) -> bool {
        true
    }

    /// Inverse-CDF draw on a `2048 × 2048` grid over `[−6σ_θ, 6σ_θ]²`, uniform
    /// within the selected cell.
    fn reference_sample(&self, rng: &mut dyn RngCore) -> Option<DVector<f64>> {
        let grid = self.grid();
        let total = *grid.cdf.last().expect("non-empty grid");
        let u = rng.random::<f64>() * total;
        let idx = grid.cdf.partition_point(|c| *c <= u).min(grid.cdf.len() - 1);
        let (i, j) = (idx / BANANA_GRID_SIZE, idx % BANANA_GRID_SIZE);
        let t1 = grid.lo + (i as f64 + rng.random::<f64>()) * grid.cell;
        let t2 = grid.lo + (j as f64 + rng.random::<f64>()) * grid.cell;
        Some(DVector::from_vec(vec![t1, t2]))
    }
}
