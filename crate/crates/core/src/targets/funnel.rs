use nalgebra::DVector;
use rand::{Rng, RngCore};
use rand_distr::StandardNormal;

use super::{MetricPolicy, Target};
use crate::error::{Error, Result};
use crate::geometry::{softabs_metric, softabs_value, MetricOrder, MetricTerms, DEFAULT_SOFTABS_ALPHA};
use crate::linalg::SymMatrix;

/// Neal's funnel over `(v, x₁, …, x_N)`: `v ~ N(0, 9)`, `xᵢ | v ~ N(0, e^{−v})`.
///
/// The metric is the SoftAbs transform of the Hessian of `−log π`.
#[derive(Debug, Clone)]
pub struct Funnel {
    n: usize,
    softabs_alpha: f64,
}

pub fn make_funnel(n: usize) -> Result<Funnel> {
    if n == 0 {
        return Err(Error::InvalidArgument("funnel needs N >= 1".into()));
    }
    Ok(Funnel {
        n,
        softabs_alpha: DEFAULT_SOFTABS_ALPHA,
    })
}

impl Funnel {
    pub fn with_softabs_alpha(mut self, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::InvalidArgument(format!("softabs alpha must be > 0, got {alpha}")));
        }
        self.softabs_alpha = alpha;
        Ok(self)
    }

    pub fn softabs_alpha(&self) -> f64 {
        self.softabs_alpha
    }

    /// Hessian of `−log π`.
    pub fn neg_log_hessian(&self, q: &DVector<f64>) -> SymMatrix {
        let ev = q[0].exp();
        let sx2: f64 = q.iter().skip(1).map(|x| x * x).sum();
        SymMatrix::from_fn(self.n + 1, |i, j| match (i, j) {
            (0, 0) => 1.0 / 9.0 + 0.5 * ev * sx2,
            (i, 0) => ev * q[i],
            (i, j) if i == j => ev,
            _ => 0.0,
        })
    }

    /// Partial derivatives of [`Funnel::neg_log_hessian`] along each coordinate.
    pub fn neg_log_hessian_derivs(&self, q: &DVector<f64>) -> Vec<SymMatrix> {
        let m = self.n + 1;
        let ev = q[0].exp();
        let sx2: f64 = q.iter().skip(1).map(|x| x * x).sum();
        let mut out = Vec::with_capacity(m);
        out.push(SymMatrix::from_fn(m, |i, j| match (i, j) {
            (0, 0) => 0.5 * ev * sx2,
            (i, 0) => ev * q[i],
            (i, j) if i == j => ev,
            _ => 0.0,
        }));
        for k in 1..m {
            out.push(SymMatrix::from_fn(m, |i, j| match (i, j) {
                (0, 0) => ev * q[k],
                (i, 0) if i == k => ev,
                _ => 0.0,
            }));
        }
        out
    }
}

impl Target for Funnel {
    fn dim(&self) -> usize {
        self.n + 1
    }

    fn log_density(&self, q: &DVector<f64>) -> f64 {
        let v = q[0];
        let sx2: f64 = q.iter().skip(1).map(|x| x * x).sum();
        -v * v / 18.0 + 0.5 * self.n as f64 * v - 0.5 * v.exp() * sx2
    }

    fn grad_log_density(&self, q: &DVector<f64>) -> DVector<f64> {
        let v = q[0];
        let ev = v.exp();
        let sx2: f64 = q.iter().skip(1).map(|x| x * x).sum();
        DVector::from_fn(self.dim(), |i, _| {
            if i == 0 {
                -v / 9.0 + 0.5 * self.n as f64 - 0.5 * ev * sx2
            } else {
                -ev * q[i]
            }
        })
    }

    fn metric_policy(&self) -> MetricPolicy {
        MetricPolicy::SoftAbs {
            alpha: self.softabs_alpha,
        }
    }

    fn metric_terms(&self, q: &DVector<f64>, order: MetricOrder) -> Result<MetricTerms> {
        let h = self.neg_log_hessian(q);
        match order {
            MetricOrder::Value => Ok(MetricTerms {
                g: softabs_value(&h, self.softabs_alpha)?,
                dg: None,
            }),
            MetricOrder::WithDerivatives => {
                softabs_metric(&h, &self.neg_log_hessian_derivs(q), self.softabs_alpha)
            }
        }
    }

    fn has_reference_sampler(&self) -> bool {
        true
    }

    fn reference_sample(&self, rng: &mut dyn RngCore) -> Option<DVector<f64>> {
        let z: f64 = rng.sample(StandardNormal);
        let v = 3.0 * z;
        let sd = (-0.5 * v).exp();
        let mut q = DVector::zeros(self.dim());
        q[0] = v;
        for i in 1..self.dim() {
            let z: f64 = rng.sample(StandardNormal);
            q[i] = sd * z;
        }
        Some(q)
    }
}
