//! Central finite differences for checking hand-coded derivatives of a
//! [`Target`] and for numerically differentiating integrator maps.

use nalgebra::{DMatrix, DVector};

use crate::error::Result;
use crate::geometry::MetricOrder;
use crate::targets::Target;

/// Coordinate step `1e−6 · max(1, |qᵢ|)`.
pub fn default_step(x: f64) -> f64 {
    1e-6 * x.abs().max(1.0)
}

pub fn gradient(f: impl Fn(&DVector<f64>) -> f64, q: &DVector<f64>) -> DVector<f64> {
    DVector::from_fn(q.len(), |i, _| {
        let h = default_step(q[i]);
        let mut a = q.clone();
        let mut b = q.clone();
        a[i] += h;
        b[i] -= h;
        (f(&a) - f(&b)) / (a[i] - b[i])
    })
}

/// Jacobian of `f` with a fixed absolute step; column `j` is `∂f/∂xⱼ`.
pub fn jacobian(f: impl Fn(&DVector<f64>) -> Result<DVector<f64>>, x: &DVector<f64>, h: f64) -> Result<DMatrix<f64>> {
    let mut cols = Vec::with_capacity(x.len());
    for j in 0..x.len() {
        let mut a = x.clone();
        let mut b = x.clone();
        a[j] += h;
        b[j] -= h;
        cols.push((f(&a)? - f(&b)?) / (a[j] - b[j]));
    }
    Ok(DMatrix::from_columns(&cols))
}

/// `∂G/∂qᵢ` by differencing the metric value.
pub fn metric_derivatives<T: Target + ?Sized>(target: &T, q: &DVector<f64>) -> Result<Vec<DMatrix<f64>>> {
    (0..q.len())
        .map(|i| {
            let h = default_step(q[i]);
            let mut a = q.clone();
            let mut b = q.clone();
            a[i] += h;
            b[i] -= h;
            let ga = target.metric_terms(&a, MetricOrder::Value)?.g;
            let gb = target.metric_terms(&b, MetricOrder::Value)?.g;
            Ok((ga.as_matrix() - gb.as_matrix()) / (a[i] - b[i]))
        })
        .collect()
}

/// `‖a − b‖∞ / max(1, ‖b‖∞)`.
pub fn relative_error(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    (a - b).amax() / b.amax().max(1.0)
}

/// Largest gradient discrepancy against finite differences, relative.
pub fn gradient_error<T: Target + ?Sized>(target: &T, q: &DVector<f64>) -> f64 {
    let fd = gradient(|x| target.log_density(x), q);
    relative_error(&target.grad_log_density(q), &fd)
}

/// Largest absolute entrywise discrepancy between analytic and differenced
/// metric derivatives.
pub fn metric_derivative_error<T: Target + ?Sized>(target: &T, q: &DVector<f64>) -> Result<f64> {
    let analytic = target
        .metric_terms(q, MetricOrder::WithDerivatives)?
        .dg
        .ok_or(crate::Error::MissingDerivatives)?;
    let fd = metric_derivatives(target, q)?;
    Ok(analytic
        .iter()
        .zip(&fd)
        .map(|(a, b)| (a.as_matrix() - b).amax())
        .fold(0.0, f64::max))
}
