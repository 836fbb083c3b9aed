use nalgebra::DVector;
use rand::RngCore;
use rand_distr::StandardNormal;
use rand::Rng;

use super::{MetricPolicy, Target};
use crate::error::{Error, Result};
use crate::geometry::{MetricOrder, MetricTerms};
use crate::linalg::{factorize, PdFactor, SymMatrix};

/// Multivariate normal target.
///
/// With `warp == 0` the metric is the constant precision matrix. A positive
/// `warp` adds `warp · diag((q − μ)ᵢ²)`, a position-dependent metric with
/// nonzero Christoffel symbols whose stationary distribution is still known
/// in closed form.
#[derive(Debug, Clone)]
pub struct Gaussian {
    mean: DVector<f64>,
    precision: SymMatrix,
    cov_factor: PdFactor,
    warp: f64,
}

impl Gaussian {
    pub fn new(mean: DVector<f64>, covariance: SymMatrix) -> Result<Self> {
        if mean.len() != covariance.dim() {
            return Err(Error::DimensionMismatch {
                expected: mean.len(),
                found: covariance.dim(),
            });
        }
        let cov_factor = factorize(&covariance)?;
        let precision = cov_factor.inverse();
        Ok(Self {
            mean,
            precision,
            cov_factor,
            warp: 0.0,
        })
    }

    pub fn standard(dim: usize) -> Self {
        Self::new(DVector::zeros(dim), SymMatrix::identity(dim)).expect("identity is PD")
    }

    pub fn with_warp(mut self, warp: f64) -> Result<Self> {
        if !(warp >= 0.0) {
            return Err(Error::InvalidArgument(format!("warp must be >= 0, got {warp}")));
        }
        self.warp = warp;
        Ok(self)
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn covariance(&self) -> SymMatrix {
        self.cov_factor.reconstruct()
    }

    pub fn precision(&self) -> &SymMatrix {
        &self.precision
    }
}

impl Target for Gaussian {
    fn dim(&self) -> usize {
        self.mean.len()
    }

    fn log_density(&self, q: &DVector<f64>) -> f64 {
        let d = q - &self.mean;
        -0.5 * self.precision.quad_form(&d)
    }

    fn grad_log_density(&self, q: &DVector<f64>) -> DVector<f64> {
        -self.precision.mul_vec(&(q - &self.mean))
    }

    fn metric_policy(&self) -> MetricPolicy {
        if self.warp == 0.0 {
            MetricPolicy::Constant
        } else {
            MetricPolicy::Custom
        }
    }

    fn metric_terms(&self, q: &DVector<f64>, order: MetricOrder) -> Result<MetricTerms> {
        let m = self.dim();
        let d = q - &self.mean;
        let w = self.warp;
        let g = SymMatrix::from_fn(m, |i, j| {
            self.precision.get(i, j) + if i == j { w * d[i] * d[i] } else { 0.0 }
        });
        let dg = (order == MetricOrder::WithDerivatives).then(|| {
            (0..m)
                .map(|k| SymMatrix::from_fn(m, |i, j| if i == k && j == k { 2.0 * w * d[k] } else { 0.0 }))
                .collect()
        });
        Ok(MetricTerms { g, dg })
    }

    fn has_reference_sampler(&self) -> bool {
        true
    }

    fn reference_sample(&self, rng: &mut dyn RngCore) -> Option<DVector<f64>> {
        let z = DVector::from_fn(self.dim(), |_, _| rng.sample::<f64, _>(StandardNormal));
        Some(&self.mean + self.cov_factor.transform(&z).expect("dimension"))
    }
}
