//! Position-dependent metrics and the tensors derived from them.
//!
//! Christoffel symbols use the standard second-kind convention
//! `Γⁱ_{kj} = ½ Σₗ (G⁻¹)ᵢₗ (∂ₖGₗⱼ + ∂ⱼGₗₖ − ∂ₗGₖⱼ)`, symmetric in the two
//! lower indices. Some printed statements of the Lagrangian integrator place
//! the inverse-metric index on `k` and the first derivative on `qᵢ`; that form
//! is not symmetric in `(k, j)` and is not used here.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::linalg::{factorize, PdFactor, SymMatrix};
use crate::targets::Target;

/// Default SoftAbs sharpness; large values approach `|λ|`.
pub const DEFAULT_SOFTABS_ALPHA: f64 = 1e6;

/// Spectral gap below which SoftAbs uses `s′(λ)` instead of the divided
/// difference.
pub const SOFTABS_DEGENERACY_GAP: f64 = 1e-8;

/// Whether metric derivatives are needed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricOrder {
    /// `G(q)` only.
    Value,
    /// `G(q)` and `∂G/∂qᵢ` for every `i`.
    WithDerivatives,
}

/// Raw metric data returned by a target before factorization.
#[derive(Debug, Clone)]
pub struct MetricTerms {
    pub g: SymMatrix,
    pub dg: Option<Vec<SymMatrix>>,
}

/// Metric evaluated at a position together with its Cholesky factor.
#[derive(Debug, Clone)]
pub struct MetricEval {
    pub q: DVector<f64>,
    pub g: SymMatrix,
    pub factor: PdFactor,
    pub dg: Option<Vec<SymMatrix>>,
}

impl MetricEval {
    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    pub fn dg(&self) -> Result<&[SymMatrix]> {
        self.dg.as_deref().ok_or(Error::MissingDerivatives)
    }

    /// `G⁻¹ v`.
    pub fn solve(&self, v: &DVector<f64>) -> DVector<f64> {
        self.factor.solve(v).expect("dimension checked at construction")
    }

    pub fn logdet(&self) -> f64 {
        self.factor.logdet()
    }
}

/// Evaluates and factorizes the target's metric at `q`.
pub fn metric_eval<T: Target + ?Sized>(
    target: &T,
    q: &DVector<f64>,
    order: MetricOrder,
) -> Result<MetricEval> {
    if q.len() != target.dim() {
        return Err(Error::DimensionMismatch {
            expected: target.dim(),
            found: q.len(),
        });
    }
    if !q.iter().all(|x| x.is_finite()) {
        return Err(Error::NonFinite("position"));
    }
    let MetricTerms { g, dg } = target.metric_terms(q, order)?;
    if !g.is_finite() {
        return Err(Error::NonFinite("metric"));
    }
    let dg = match order {
        MetricOrder::Value => None,
        MetricOrder::WithDerivatives => {
            let dg = dg.ok_or(Error::MissingDerivatives)?;
            if dg.len() != q.len() {
                return Err(Error::DimensionMismatch {
                    expected: q.len(),
                    found: dg.len(),
                });
            }
            if !dg.iter().all(SymMatrix::is_finite) {
                return Err(Error::NonFinite("metric derivative"));
            }
            Some(dg)
        }
    };
    let factor = factorize(&g)?;
    Ok(MetricEval {
        q: q.clone(),
        g,
        factor,
        dg,
    })
}

/// Christoffel symbols of the second kind, stored as `gamma[i][k][j] = Γⁱ_{kj}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChristoffelTensor {
    dim: usize,
    data: Vec<f64>,
}

impl ChristoffelTensor {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, k: usize, j: usize) -> f64 {
        self.data[(i * self.dim + k) * self.dim + j]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| *x == 0.0)
    }
}

pub fn christoffel(me: &MetricEval) -> Result<ChristoffelTensor> {
    let dg = me.dg()?;
    let m = me.dim();
    let mut data = vec![0.0; m * m * m];
    if dg.iter().all(|d| d.max_abs() == 0.0) {
        return Ok(ChristoffelTensor { dim: m, data });
    }
    // First-kind symbols [kj, l] = ½ (∂ₖGₗⱼ + ∂ⱼGₗₖ − ∂ₗGₖⱼ), raised with G⁻¹.
    let mut first = DMatrix::<f64>::zeros(m, m * m);
    for k in 0..m {
        for j in 0..m {
            for l in 0..m {
                first[(l, k * m + j)] =
                    0.5 * (dg[k].get(l, j) + dg[j].get(l, k) - dg[l].get(k, j));
            }
        }
    }
    let second = me.factor.solve_matrix(&first)?;
    for i in 0..m {
        for k in 0..m {
            for j in 0..m {
                data[(i * m + k) * m + j] = second[(i, k * m + j)];
            }
        }
    }
    Ok(ChristoffelTensor { dim: m, data })
}

/// `Ωᵢⱼ(q, v) = Σₖ Γⁱ_{kj} vₖ`.
pub fn omega(gamma: &ChristoffelTensor, v: &DVector<f64>) -> DMatrix<f64> {
    let m = gamma.dim();
    assert_eq!(v.len(), m, "velocity dimension");
    DMatrix::from_fn(m, m, |i, j| (0..m).map(|k| gamma.get(i, k, j) * v[k]).sum())
}

/// Divergence term `Γᵢ = Σⱼ ∂(G⁻¹)ᵢⱼ/∂qⱼ` of the manifold Langevin drift.
pub fn divergence_drift<T: Target + ?Sized>(target: &T, q: &DVector<f64>) -> Result<DVector<f64>> {
    let me = metric_eval(target, q, MetricOrder::WithDerivatives)?;
    divergence_drift_from(&me)
}

/// Same as [`divergence_drift`] from an existing order-1 evaluation.
///
/// Uses `∂A/∂qⱼ = −A (∂G/∂qⱼ) A`, so `Γ = −A Σⱼ (∂G/∂qⱼ) aⱼ` with `aⱼ` the
/// j-th column of `A = G⁻¹`.
pub fn divergence_drift_from(me: &MetricEval) -> Result<DVector<f64>> {
    let dg = me.dg()?;
    let m = me.dim();
    let mut acc = DVector::<f64>::zeros(m);
    let mut e = DVector::<f64>::zeros(m);
    for (j, dgj) in dg.iter().enumerate() {
        e.fill(0.0);
        e[j] = 1.0;
        let aj = me.solve(&e);
        acc += dgj.mul_vec(&aj);
    }
    Ok(-me.solve(&acc))
}

/// `x coth x` and its derivative, with series and asymptotic branches.
fn xcothx(x: f64) -> (f64, f64) {
    let ax = x.abs();
    if ax < 1e-4 {
        let x2 = x * x;
        (1.0 + x2 / 3.0 - x2 * x2 / 45.0, 2.0 * x / 3.0 - 4.0 * x * x2 / 45.0)
    } else if ax > 20.0 {
        (ax, x.signum())
    } else {
        let c = 1.0 / x.tanh();
        let sh = x.sinh();
        (x * c, c - x / (sh * sh))
    }
}

/// `s(λ) = λ coth(αλ)` and `s′(λ)`.
pub fn softabs_eigenvalue(lambda: f64, alpha: f64) -> (f64, f64) {
    let (f, df) = xcothx(alpha * lambda);
    (f / alpha, df)
}

fn eigen(h: &SymMatrix) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let eig = SymmetricEigen::try_new(h.as_matrix().clone(), f64::EPSILON, 10_000)
        .ok_or(Error::EigenFailure)?;
    Ok((eig.eigenvalues, eig.eigenvectors))
}

fn reassemble(q: &DMatrix<f64>, diag_or_core: &DMatrix<f64>) -> SymMatrix {
    SymMatrix::symmetrize(&(q * diag_or_core * q.transpose())).expect("square")
}

/// SoftAbs transform of a Hessian without derivatives.
pub fn softabs_value(hessian: &SymMatrix, alpha: f64) -> Result<SymMatrix> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidArgument(format!("softabs alpha must be > 0, got {alpha}")));
    }
    if !hessian.is_finite() {
        return Err(Error::NonFinite("hessian"));
    }
    let (lam, q) = eigen(hessian)?;
    let d = DMatrix::from_diagonal(&lam.map(|l| softabs_eigenvalue(l, alpha).0));
    Ok(reassemble(&q, &d))
}

/// SoftAbs metric `G = Q diag(s(λ)) Qᵀ` and its partial derivatives
/// `∂G/∂qᵢ = Q (R ∘ Qᵀ ∂H/∂qᵢ Q) Qᵀ`, where `R` is the divided-difference
/// matrix of `s` over the spectrum.
pub fn softabs_metric(
    hessian: &SymMatrix,
    d_hessian: &[SymMatrix],
    alpha: f64,
) -> Result<MetricTerms> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidArgument(format!("softabs alpha must be > 0, got {alpha}")));
    }
    if !hessian.is_finite() || !d_hessian.iter().all(SymMatrix::is_finite) {
        return Err(Error::NonFinite("hessian"));
    }
    let m = hessian.dim();
    let (lam, q) = eigen(hessian)?;
    let (s, ds): (Vec<f64>, Vec<f64>) = lam.iter().map(|&l| softabs_eigenvalue(l, alpha)).unzip();
    let r = DMatrix::from_fn(m, m, |j, k| {
        let gap = lam[j] - lam[k];
        if gap.abs() < SOFTABS_DEGENERACY_GAP {
            ds[j]
        } else {
            (s[j] - s[k]) / gap
        }
    });
    let g = reassemble(&q, &DMatrix::from_diagonal(&DVector::from_vec(s)));
    let dg = d_hessian
        .iter()
        .map(|dh| {
            let rotated = q.transpose() * dh.as_matrix() * &q;
            reassemble(&q, &r.component_mul(&rotated))
        })
        .collect();
    Ok(MetricTerms { g, dg: Some(dg) })
}
