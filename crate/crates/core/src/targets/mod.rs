//! Benchmark posteriors and the [`Target`] trait every kernel consumes.
//!
//! Log-densities are unnormalized throughout; kernels only ever use
//! differences of `log π` and of the Hamiltonian.

use std::sync::Arc;

use nalgebra::DVector;
use rand::RngCore;

use crate::error::{Error, Result};
use crate::geometry::{MetricOrder, MetricTerms};
use crate::linalg::{factorize, SymMatrix};

mod banana;
mod funnel;
mod gaussian;
mod logistic;
mod student_t;

pub use banana::{make_banana, Banana, BananaData, BANANA_GRID_SIZE};
pub use funnel::{make_funnel, Funnel};
pub use gaussian::Gaussian;
pub use logistic::{
    gibbs_alpha_update, make_hier_logistic, HierLogistic, LogisticConditional, LogisticData, BUNDLED_SEED,
    LogisticGibbsState,
};
pub use student_t::{make_student_t, StudentT};

/// How a target builds its Riemannian metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetricPolicy {
    /// Position-independent mass matrix (Euclidean HMC, MALA).
    Constant,
    /// Fisher information plus the negative Hessian of the log-prior.
    FisherPlusPrior,
    /// SoftAbs transform of the Hessian of `−log π`.
    SoftAbs { alpha: f64 },
    /// Positive-definite term of the Hessian of `−log π`.
    HessianPdTerm,
    /// Any other hand-coded position-dependent metric.
    Custom,
}

impl MetricPolicy {
    pub fn is_constant(&self) -> bool {
        matches!(self, MetricPolicy::Constant)
    }

    pub fn name(&self) -> &'static str {
        match self {
            MetricPolicy::Constant => "constant",
            MetricPolicy::FisherPlusPrior => "fisher-plus-prior",
            MetricPolicy::SoftAbs { .. } => "softabs",
            MetricPolicy::HessianPdTerm => "hessian-pd-term",
            MetricPolicy::Custom => "custom",
        }
    }
}

/// A posterior distribution with a metric.
pub trait Target: Send + Sync {
    fn dim(&self) -> usize;

    /// Unnormalized `log π(q)`. May return `-∞` outside the support.
    fn log_density(&self, q: &DVector<f64>) -> f64;

    fn grad_log_density(&self, q: &DVector<f64>) -> DVector<f64>;

    fn metric_policy(&self) -> MetricPolicy;

    /// `G(q)` and, for [`MetricOrder::WithDerivatives`], `∂G/∂qᵢ`.
    fn metric_terms(&self, q: &DVector<f64>, order: MetricOrder) -> Result<MetricTerms>;

    fn has_reference_sampler(&self) -> bool {
        false
    }

    /// One i.i.d. draw from the target, when an exact sampler exists.
    fn reference_sample(&self, _rng: &mut dyn RngCore) -> Option<DVector<f64>> {
        None
    }
}

macro_rules! forward_target {
    ($($ty:ty),*) => {$(
        impl<T: Target + ?Sized> Target for $ty {
            fn dim(&self) -> usize { (**self).dim() }
            fn log_density(&self, q: &DVector<f64>) -> f64 { (**self).log_density(q) }
            fn grad_log_density(&self, q: &DVector<f64>) -> DVector<f64> { (**self).grad_log_density(q) }
            fn metric_policy(&self) -> MetricPolicy { (**self).metric_policy() }
            fn metric_terms(&self, q: &DVector<f64>, order: MetricOrder) -> Result<MetricTerms> {
                (**self).metric_terms(q, order)
            }
            fn has_reference_sampler(&self) -> bool { (**self).has_reference_sampler() }
            fn reference_sample(&self, rng: &mut dyn RngCore) -> Option<DVector<f64>> {
                (**self).reference_sample(rng)
            }
        }
    )*};
}

forward_target!(&T, Box<T>, Arc<T>);

/// Replaces a target's metric by a fixed positive-definite matrix.
#[derive(Debug, Clone)]
pub struct ConstantMetric<T> {
    inner: T,
    metric: SymMatrix,
}

impl<T: Target> ConstantMetric<T> {
    pub fn new(inner: T, metric: SymMatrix) -> Result<Self> {
        if metric.dim() != inner.dim() {
            return Err(Error::DimensionMismatch {
                expected: inner.dim(),
                found: metric.dim(),
            });
        }
        factorize(&metric)?;
        Ok(Self { inner, metric })
    }

    pub fn identity(inner: T) -> Self {
        let metric = SymMatrix::identity(inner.dim());
        Self { inner, metric }
    }

    pub fn inner(&self) -> &T {
        &self.inner
    }

    pub fn metric(&self) -> &SymMatrix {
        &self.metric
    }
}

impl<T: Target> Target for ConstantMetric<T> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn log_density(&self, q: &DVector<f64>) -> f64 {
        self.inner.log_density(q)
    }

    fn grad_log_density(&self, q: &DVector<f64>) -> DVector<f64> {
        self.inner.grad_log_density(q)
    }

    fn metric_policy(&self) -> MetricPolicy {
        MetricPolicy::Constant
    }

    fn metric_terms(&self, _q: &DVector<f64>, order: MetricOrder) -> Result<MetricTerms> {
        let m = self.dim();
        Ok(MetricTerms {
            g: self.metric.clone(),
            dg: (order == MetricOrder::WithDerivatives).then(|| vec![SymMatrix::zeros(m); m]),
        })
    }

    fn has_reference_sampler(&self) -> bool {
        self.inner.has_reference_sampler()
    }

    fn reference_sample(&self, rng: &mut dyn RngCore) -> Option<DVector<f64>> {
        self.inner.reference_sample(rng)
    }
}

/// Numerically stable `log(1 + eᵗ)`.
pub(crate) fn softplus(t: f64) -> f64 {
    t.max(0.0) + (-t.abs()).exp().ln_1p()
}

/// Numerically stable `1 / (1 + e⁻ᵗ)`.
pub(crate) fn logistic(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}
