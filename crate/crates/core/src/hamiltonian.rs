//! Riemannian Hamiltonian `H(q, p) = −log π(q) + ½ log det G(q) + ½ pᵀG⁻¹(q)p`,
//! its partial gradients, and the Lagrangian potential
//! `U(q) = −log π(q) + ½ log det G(q)`.

use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::geometry::{metric_eval, MetricEval, MetricOrder};
use crate::targets::Target;

/// Point in phase space.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseState {
    pub q: DVector<f64>,
    pub p: DVector<f64>,
}

impl PhaseState {
    pub fn new(q: DVector<f64>, p: DVector<f64>) -> Self {
        assert_eq!(q.len(), p.len(), "position and momentum dimension");
        Self { q, p }
    }

    /// The momentum flip `F(q, p) = (q, −p)`.
    pub fn flipped(&self) -> Self {
        Self {
            q: self.q.clone(),
            p: -&self.p,
        }
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }

    pub fn is_finite(&self) -> bool {
        self.q.iter().chain(self.p.iter()).all(|x| x.is_finite())
    }
}

/// Everything position-dependent that the integrators need at one `q`.
#[derive(Debug, Clone)]
pub struct PointEval {
    pub q: DVector<f64>,
    pub log_density: f64,
    pub grad_log_density: DVector<f64>,
    pub metric: MetricEval,
    /// `tr(G⁻¹ ∂ᵢG)`; present for order-1 evaluations.
    traces: Option<Vec<f64>>,
}

impl PointEval {
    pub fn new<T: Target + ?Sized>(target: &T, q: &DVector<f64>, order: MetricOrder) -> Result<Self> {
        let metric = metric_eval(target, q, order)?;
        let log_density = target.log_density(q);
        if !log_density.is_finite() {
            return Err(Error::NonFinite("log density"));
        }
        let grad_log_density = target.grad_log_density(q);
        if !grad_log_density.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite("log density gradient"));
        }
        let traces = match &metric.dg {
            Some(dg) => Some(
                dg.iter()
                    .map(|d| Ok(metric.factor.solve_matrix(d.as_matrix())?.trace()))
                    .collect::<Result<Vec<f64>>>()?,
            ),
            None => None,
        };
        Ok(Self {
            q: q.clone(),
            log_density,
            grad_log_density,
            metric,
            traces,
        })
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }

    fn traces(&self) -> Result<&[f64]> {
        self.traces.as_deref().ok_or(Error::MissingDerivatives)
    }

    /// `½ pᵀ G⁻¹ p`.
    pub fn kinetic(&self, p: &DVector<f64>) -> f64 {
        0.5 * p.dot(&self.metric.solve(p))
    }

    /// `U(q)`.
    pub fn potential(&self) -> f64 {
        -self.log_density + 0.5 * self.metric.logdet()
    }

    pub fn hamiltonian(&self, p: &DVector<f64>) -> f64 {
        self.potential() + self.kinetic(p)
    }

    /// `∇U(q)ᵢ = −∂ᵢ log π + ½ tr(G⁻¹ ∂ᵢG)`.
    pub fn grad_potential(&self) -> Result<DVector<f64>> {
        let tr = self.traces()?;
        Ok(DVector::from_fn(self.dim(), |i, _| {
            -self.grad_log_density[i] + 0.5 * tr[i]
        }))
    }

    /// `∇_q H(q, p)ᵢ = ∇U(q)ᵢ − ½ pᵀ G⁻¹ ∂ᵢG G⁻¹ p`.
    pub fn grad_q_hamiltonian(&self, p: &DVector<f64>) -> Result<DVector<f64>> {
        let tr = self.traces()?;
        let dg = self.metric.dg()?;
        let u = self.metric.solve(p);
        Ok(DVector::from_fn(self.dim(), |i, _| {
            -self.grad_log_density[i] + 0.5 * tr[i] - 0.5 * dg[i].quad_form(&u)
        }))
    }

    /// `∇_p H(q, p) = G⁻¹ p`.
    pub fn grad_p_hamiltonian(&self, p: &DVector<f64>) -> DVector<f64> {
        self.metric.solve(p)
    }
}

fn check_state<T: Target + ?Sized>(target: &T, s: &PhaseState) -> Result<()> {
    if s.p.len() != target.dim() {
        return Err(Error::DimensionMismatch {
            expected: target.dim(),
            found: s.p.len(),
        });
    }
    if !s.p.iter().all(|x| x.is_finite()) {
        return Err(Error::NonFinite("momentum"));
    }
    Ok(())
}

pub fn hamiltonian<T: Target + ?Sized>(target: &T, s: &PhaseState) -> Result<f64> {
    check_state(target, s)?;
    Ok(PointEval::new(target, &s.q, MetricOrder::Value)?.hamiltonian(&s.p))
}

pub fn grad_q_hamiltonian<T: Target + ?Sized>(target: &T, s: &PhaseState) -> Result<DVector<f64>> {
    check_state(target, s)?;
    PointEval::new(target, &s.q, MetricOrder::WithDerivatives)?.grad_q_hamiltonian(&s.p)
}

pub fn grad_p_hamiltonian<T: Target + ?Sized>(target: &T, s: &PhaseState) -> Result<DVector<f64>> {
    check_state(target, s)?;
    Ok(metric_eval(target, &s.q, MetricOrder::Value)?.solve(&s.p))
}

/// `(U(q), ∇U(q))`.
pub fn lagrangian_potential<T: Target + ?Sized>(
    target: &T,
    q: &DVector<f64>,
) -> Result<(f64, DVector<f64>)> {
    let pe = PointEval::new(target, q, MetricOrder::WithDerivatives)?;
    Ok((pe.potential(), pe.grad_potential()?))
}

/// `m` independent standard normal draws.
pub fn standard_normal<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DVector<f64> {
    DVector::from_fn(dim, |_, _| rng.sample::<f64, _>(StandardNormal))
}

/// Draws `p ~ N(0, G(q))` as `L z`.
pub fn sample_momentum<T: Target + ?Sized, R: Rng + ?Sized>(
    target: &T,
    q: &DVector<f64>,
    rng: &mut R,
) -> Result<DVector<f64>> {
    let me = metric_eval(target, q, MetricOrder::Value)?;
    momentum_from(&me, rng)
}

pub(crate) fn momentum_from<R: Rng + ?Sized>(me: &MetricEval, rng: &mut R) -> Result<DVector<f64>> {
    let z = standard_normal(me.dim(), rng);
    me.factor.transform(&z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::MetricTerms;
    use crate::linalg::SymMatrix;
    use crate::targets::{Gaussian, MetricPolicy};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    struct ExpMetric;

    impl Target for ExpMetric {
        fn dim(&self) -> usize {
            1
        }
        fn log_density(&self, _q: &DVector<f64>) -> f64 {
            0.0
        }
        fn grad_log_density(&self, _q: &DVector<f64>) -> DVector<f64> {
            DVector::zeros(1)
        }
        fn metric_policy(&self) -> MetricPolicy {
            MetricPolicy::Custom
        }
        fn metric_terms(&self, q: &DVector<f64>, order: MetricOrder) -> Result<MetricTerms> {
            let g = SymMatrix::from_diagonal(&[q[0].exp()]);
            let dg = (order == MetricOrder::WithDerivatives).then(|| vec![g.clone()]);
            Ok(MetricTerms { g, dg })
        }
    }

    fn v(x: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(x)
    }

    #[test]
    fn gaussian_values() {
        let t = Gaussian::standard(2);
        let s = PhaseState::new(v(&[0.0, 0.0]), v(&[0.0, 0.0]));
        assert_eq!(hamiltonian(&t, &s).unwrap(), 0.0);
        let s = PhaseState::new(v(&[1.0, 0.0]), v(&[0.0, 2.0]));
        assert!((hamiltonian(&t, &s).unwrap() - 2.5).abs() < 1e-15);
        assert_eq!(hamiltonian(&t, &s).unwrap(), hamiltonian(&t, &s.flipped()).unwrap());
    }

    #[test]
    fn exp_metric_values() {
        let s = PhaseState::new(v(&[0.0]), v(&[1.0]));
        assert!((hamiltonian(&ExpMetric, &s).unwrap() - 0.5).abs() < 1e-15);
        let s0 = PhaseState::new(v(&[0.0]), v(&[0.0]));
        let g = grad_q_hamiltonian(&ExpMetric, &s0).unwrap();
        assert!((g[0] - 0.5).abs() < 1e-15);
        let (u, du) = lagrangian_potential(&ExpMetric, &v(&[0.8])).unwrap();
        assert!((u - 0.4).abs() < 1e-15);
        assert!((du[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn constant_metric_gradients() {
        let t = Gaussian::standard(3);
        let s = PhaseState::new(v(&[0.3, -1.0, 2.0]), v(&[1.0, 0.5, -0.2]));
        let gq = grad_q_hamiltonian(&t, &s).unwrap();
        assert_eq!(gq, s.q.clone());
        assert_eq!(grad_p_hamiltonian(&t, &s).unwrap(), s.p.clone());
        let zero = PhaseState::new(s.q.clone(), DVector::zeros(3));
        assert_eq!(grad_p_hamiltonian(&t, &zero).unwrap(), DVector::zeros(3));
        let (u, du) = lagrangian_potential(&t, &s.q).unwrap();
        assert!((u - 0.5 * s.q.norm_squared()).abs() < 1e-15);
        assert_eq!(du, s.q);
    }

    #[test]
    fn identity_momentum_is_raw_normals() {
        let t = Gaussian::standard(4);
        let mut a = ChaCha8Rng::seed_from_u64(11);
        let mut b = ChaCha8Rng::seed_from_u64(11);
        let p = sample_momentum(&t, &DVector::zeros(4), &mut a).unwrap();
        assert_eq!(p, standard_normal(4, &mut b));
        let mut c = ChaCha8Rng::seed_from_u64(11);
        assert_eq!(p, sample_momentum(&t, &DVector::zeros(4), &mut c).unwrap());
    }

    #[test]
    fn momentum_dimension_checked() {
        let t = Gaussian::standard(2);
        let s = PhaseState {
            q: v(&[0.0, 0.0]),
            p: v(&[1.0]),
        };
        assert!(matches!(hamiltonian(&t, &s), Err(Error::DimensionMismatch { .. })));
    }
}
