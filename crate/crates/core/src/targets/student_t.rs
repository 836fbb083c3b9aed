use nalgebra::DVector;
use rand::{Rng, RngCore};
use rand_distr::{ChiSquared, StandardNormal};

use super::{MetricPolicy, Target};
use crate::error::{Error, Result};
use crate::geometry::{MetricOrder, MetricTerms};
use crate::linalg::SymMatrix;

/// Multivariate Student-t with diagonal scale matrix `Σ = diag(σ²)`.
///
/// The metric is the positive-definite term of the Hessian of `−log π`,
/// `G(q) = (m + ν) / (ν + qᵀΣ⁻¹q) · Σ⁻¹`.
#[derive(Debug, Clone)]
pub struct StudentT {
    nu: f64,
    sigma_diag: Vec<f64>,
}

/// `sigma_diag` holds the diagonal of `Σ` (variances, not standard deviations).
pub fn make_student_t(m: usize, nu: f64, sigma_diag: &[f64]) -> Result<StudentT> {
    if !(nu > 2.0) {
        return Err(Error::InvalidArgument(format!("nu must be > 2, got {nu}")));
    }
    if sigma_diag.len() != m || m == 0 {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: sigma_diag.len(),
        });
    }
    if sigma_diag.iter().any(|s| !(*s > 0.0)) {
        return Err(Error::InvalidArgument("scale diagonal must be positive".into()));
    }
    Ok(StudentT {
        nu,
        sigma_diag: sigma_diag.to_vec(),
    })
}

impl StudentT {
    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn sigma_diag(&self) -> &[f64] {
        &self.sigma_diag
    }

    fn mahalanobis(&self, q: &DVector<f64>) -> f64 {
        q.iter().zip(&self.sigma_diag).map(|(x, s)| x * x / s).sum()
    }

    fn df_plus_dim(&self) -> f64 {
        self.sigma_diag.len() as f64 + self.nu
    }
}

impl Target for StudentT {
    fn dim(&self) -> usize {
        self.sigma_diag.len()
    }

    fn log_density(&self, q: &DVector<f64>) -> f64 {
        -0.5 * self.df_plus_dim() * (self.mahalanobis(q) / self.nu).ln_1p()
    }

    fn grad_log_density(&self, q: &DVector<f64>) -> DVector<f64> {
        let c = -self.df_plus_dim() / (self.nu + self.mahalanobis(q));
        DVector::from_fn(self.dim(), |i, _| c * q[i] / self.sigma_diag[i])
    }

    fn metric_policy(&self) -> MetricPolicy {
        MetricPolicy::HessianPdTerm
    }

    fn metric_terms(&self, q: &DVector<f64>, order: MetricOrder) -> Result<MetricTerms> {
        let m = self.dim();
        let denom = self.nu + self.mahalanobis(q);
        let c = self.df_plus_dim() / denom;
        let inv: Vec<f64> = self.sigma_diag.iter().map(|s| 1.0 / s).collect();
        let g = SymMatrix::from_diagonal(&inv.iter().map(|x| c * x).collect::<Vec<_>>());
        let dg = (order == MetricOrder::WithDerivatives).then(|| {
            (0..m)
                .map(|i| {
                    let dc = -self.df_plus_dim() * 2.0 * q[i] * inv[i] / (denom * denom);
                    SymMatrix::from_diagonal(&inv.iter().map(|x| dc * x).collect::<Vec<_>>())
                })
                .collect()
        });
        Ok(MetricTerms { g, dg })
    }

    fn has_reference_sampler(&self) -> bool {
        true
    }

    fn reference_sample(&self, rng: &mut dyn RngCore) -> Option<DVector<f64>> {
        let chi = ChiSquared::new(self.nu).expect("nu > 2");
        let w: f64 = rng.sample(chi);
        let scale = (self.nu / w).sqrt();
        Some(DVector::from_fn(self.dim(), |i, _| {
            let z: f64 = rng.sample(StandardNormal);
            self.sigma_diag[i].sqrt() * z * scale
        }))
    }
}
