//! Leapfrog maps on phase space and their k-step compositions.
//!
//! Three schemes are provided: the explicit Euclidean leapfrog for constant
//! metrics, the implicit generalized leapfrog (Picard fixed-point solves), and
//! the explicit Lagrangian leapfrog in velocity coordinates, which is not
//! volume preserving and reports its log-Jacobian.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::geometry::{christoffel, metric_eval, omega, MetricOrder};
use crate::hamiltonian::{PhaseState, PointEval};
use crate::targets::Target;

pub const DEFAULT_FP_TOL: f64 = 1e-10;
pub const DEFAULT_FP_MAX_ITERS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub step_size: f64,
    /// Sup-norm tolerance on successive fixed-point iterates.
    pub fp_tol: f64,
    pub fp_max_iters: usize,
}

impl IntegratorConfig {
    pub fn new(step_size: f64) -> Self {
        Self {
            step_size,
            fp_tol: DEFAULT_FP_TOL,
            fp_max_iters: DEFAULT_FP_MAX_ITERS,
        }
    }

    pub fn with_fixed_point(mut self, tol: f64, max_iters: usize) -> Self {
        self.fp_tol = tol;
        self.fp_max_iters = max_iters;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.step_size.is_finite() {
            return Err(Error::InvalidArgument("step size must be finite".into()));
        }
        if !(self.fp_tol > 0.0) {
            return Err(Error::InvalidArgument("fp_tol must be positive".into()));
        }
        if self.fp_max_iters == 0 {
            return Err(Error::InvalidArgument("fp_max_iters must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Euclidean,
    Generalized,
    Lagrangian,
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Euclidean => "euclidean",
            Scheme::Generalized => "generalized",
            Scheme::Lagrangian => "lagrangian",
        }
    }

    fn order(&self) -> MetricOrder {
        match self {
            Scheme::Euclidean => MetricOrder::Value,
            _ => MetricOrder::WithDerivatives,
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(Scheme::Euclidean),
            "generalized" => Ok(Scheme::Generalized),
            "lagrangian" => Ok(Scheme::Lagrangian),
            other => Err(Error::InvalidArgument(format!("unknown scheme '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepResult {
    pub state: PhaseState,
    pub log_jacobian: f64,
    pub converged: bool,
    pub fp_iters_used: usize,
}

fn sup_diff(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn check_inputs<T: Target + ?Sized>(target: &T, s: &PhaseState, cfg: &IntegratorConfig) -> Result<()> {
    cfg.validate()?;
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

// Each single-step routine takes the evaluation at the start point and hands
// back the evaluation at the end point so compositions reuse it.
struct Step {
    result: StepResult,
    end: Option<PointEval>,
}

fn failed(state: PhaseState, iters: usize) -> Step {
    Step {
        result: StepResult {
            state,
            log_jacobian: 0.0,
            converged: false,
            fp_iters_used: iters,
        },
        end: None,
    }
}

fn euclidean_from<T: Target + ?Sized>(
    target: &T,
    start: &PointEval,
    p: &DVector<f64>,
    eps: f64,
) -> Result<Step> {
    let h = 0.5 * eps;
    let p_half = p + &start.grad_log_density * h;
    let q_new = &start.q + start.metric.solve(&p_half) * eps;
    let end = PointEval::new(target, &q_new, MetricOrder::Value)?;
    let p_new = &p_half + &end.grad_log_density * h;
    if !p_new.iter().all(|x| x.is_finite()) {
        return Err(Error::NonFinite("momentum"));
    }
    Ok(Step {
        result: StepResult {
            state: PhaseState::new(q_new, p_new),
            log_jacobian: 0.0,
            converged: true,
            fp_iters_used: 0,
        },
        end: Some(end),
    })
}

fn generalized_from<T: Target + ?Sized>(
    target: &T,
    start: &PointEval,
    p: &DVector<f64>,
    cfg: &IntegratorConfig,
) -> Result<Step> {
    let h = 0.5 * cfg.step_size;
    let mut iters = 0;

    // p̆ = p − h ∇_q H(q, p̆)
    let mut p_half = p.clone();
    let mut converged = false;
    for _ in 0..cfg.fp_max_iters {
        iters += 1;
        let next = p - start.grad_q_hamiltonian(&p_half)? * h;
        if !next.iter().all(|x| x.is_finite()) {
            return Ok(failed(PhaseState::new(start.q.clone(), next), iters));
        }
        let delta = sup_diff(&next, &p_half);
        p_half = next;
        if delta <= cfg.fp_tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Ok(failed(PhaseState::new(start.q.clone(), p_half), iters));
    }

    // q̃ = q + h (G⁻¹(q) + G⁻¹(q̃)) p̆
    let fixed = &start.q + start.metric.solve(&p_half) * h;
    let mut q_new = start.q.clone();
    converged = false;
    for _ in 0..cfg.fp_max_iters {
        iters += 1;
        let me = match metric_eval(target, &q_new, MetricOrder::Value) {
            Ok(me) => me,
            Err(_) => return Ok(failed(PhaseState::new(q_new, p_half), iters)),
        };
        let next = &fixed + me.solve(&p_half) * h;
        if !next.iter().all(|x| x.is_finite()) {
            return Ok(failed(PhaseState::new(next, p_half), iters));
        }
        let delta = sup_diff(&next, &q_new);
        q_new = next;
        if delta <= cfg.fp_tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Ok(failed(PhaseState::new(q_new, p_half), iters));
    }

    let end = PointEval::new(target, &q_new, MetricOrder::WithDerivatives)?;
    let p_new = &p_half - end.grad_q_hamiltonian(&p_half)? * h;
    if !p_new.iter().all(|x| x.is_finite()) {
        return Err(Error::NonFinite("momentum"));
    }
    Ok(Step {
        result: StepResult {
            state: PhaseState::new(q_new, p_new),
            log_jacobian: 0.0,
            converged: true,
            fp_iters_used: iters,
        },
        end: Some(end),
    })
}

/// Solves `(I + c Ω) x = b` and returns `(x, log|det(I + c Ω)|)`.
fn solve_shifted(om: &DMatrix<f64>, c: f64, b: &DVector<f64>) -> Result<(DVector<f64>, f64)> {
    let m = om.nrows();
    let a = DMatrix::identity(m, m) + om * c;
    let lu = a.lu();
    let det = lu.determinant();
    if det == 0.0 || !det.is_finite() {
        return Err(Error::SingularUpdate);
    }
    let x = lu.solve(b).ok_or(Error::SingularUpdate)?;
    if !x.iter().all(|v| v.is_finite()) {
        return Err(Error::SingularUpdate);
    }
    Ok((x, det.abs().ln()))
}

fn log_abs_det_shifted(om: &DMatrix<f64>, c: f64) -> Result<f64> {
    let m = om.nrows();
    let det = (DMatrix::identity(m, m) + om * c).lu().determinant();
    if det == 0.0 || !det.is_finite() {
        return Err(Error::SingularUpdate);
    }
    Ok(det.abs().ln())
}

fn lagrangian_from<T: Target + ?Sized>(
    target: &T,
    start: &PointEval,
    p: &DVector<f64>,
    eps: f64,
) -> Result<Step> {
    let h = 0.5 * eps;

    let v = start.metric.solve(p);
    let gamma0 = christoffel(&start.metric)?;
    let force0 = start.metric.solve(&start.grad_potential()?);
    let om_qv = omega(&gamma0, &v);
    let (v_half, ld_plus_qv) = solve_shifted(&om_qv, h, &(&v - &force0 * h))?;
    let ld_minus_qvh = log_abs_det_shifted(&omega(&gamma0, &v_half), -h)?;

    let q_new = &start.q + &v_half * eps;
    let end = PointEval::new(target, &q_new, MetricOrder::WithDerivatives)?;
    let gamma1 = christoffel(&end.metric)?;
    let force1 = end.metric.solve(&end.grad_potential()?);
    let (v_new, ld_plus_q1vh) = solve_shifted(&omega(&gamma1, &v_half), h, &(&v_half - &force1 * h))?;
    let ld_minus_q1v1 = log_abs_det_shifted(&omega(&gamma1, &v_new), -h)?;

    let p_new = end.metric.g.mul_vec(&v_new);
    if !p_new.iter().all(|x| x.is_finite()) {
        return Err(Error::NonFinite("momentum"));
    }

    // Chain rule through p → v → v̆ → (q̃, v̆) → ṽ → p̃.
    let log_jacobian = end.metric.logdet() - start.metric.logdet() + ld_minus_qvh - ld_plus_qv
        + ld_minus_q1v1
        - ld_plus_q1vh;

    Ok(Step {
        result: StepResult {
            state: PhaseState::new(q_new, p_new),
            log_jacobian,
            converged: log_jacobian.is_finite(),
            fp_iters_used: 0,
        },
        end: Some(end),
    })
}

fn require_constant<T: Target + ?Sized>(target: &T) -> Result<()> {
    if target.metric_policy().is_constant() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(
            "euclidean leapfrog requires a constant-metric target".into(),
        ))
    }
}

fn step_from<T: Target + ?Sized>(
    target: &T,
    start: &PointEval,
    p: &DVector<f64>,
    cfg: &IntegratorConfig,
    scheme: Scheme,
) -> Result<Step> {
    match scheme {
        Scheme::Euclidean => euclidean_from(target, start, p, cfg.step_size),
        Scheme::Generalized => generalized_from(target, start, p, cfg),
        Scheme::Lagrangian => lagrangian_from(target, start, p, cfg.step_size),
    }
}

fn single<T: Target + ?Sized>(
    target: &T,
    s: &PhaseState,
    cfg: &IntegratorConfig,
    scheme: Scheme,
) -> Result<StepResult> {
    check_inputs(target, s, cfg)?;
    if scheme == Scheme::Euclidean {
        require_constant(target)?;
    }
    let start = PointEval::new(target, &s.q, scheme.order())?;
    Ok(step_from(target, &start, &s.p, cfg, scheme)?.result)
}

/// One Euclidean leapfrog step; the target must have a constant metric.
pub fn euclidean_leapfrog_step<T: Target + ?Sized>(
    target: &T,
    s: &PhaseState,
    cfg: &IntegratorConfig,
) -> Result<StepResult> {
    single(target, s, cfg, Scheme::Euclidean)
}

/// One generalized leapfrog step. Fixed-point failure is reported through
/// `converged = false`, never as an error.
pub fn generalized_leapfrog_step<T: Target + ?Sized>(
    target: &T,
    s: &PhaseState,
    cfg: &IntegratorConfig,
) -> Result<StepResult> {
    single(target, s, cfg, Scheme::Generalized)
}

/// One Lagrangian leapfrog step with its log-Jacobian.
pub fn lagrangian_leapfrog_step<T: Target + ?Sized>(
    target: &T,
    s: &PhaseState,
    cfg: &IntegratorConfig,
) -> Result<StepResult> {
    single(target, s, cfg, Scheme::Lagrangian)
}

/// `k` composed steps followed by the momentum flip. Stops at the first
/// non-converged step.
pub fn integrate<T: Target + ?Sized>(
    target: &T,
    s: &PhaseState,
    cfg: &IntegratorConfig,
    k: usize,
    scheme: Scheme,
) -> Result<StepResult> {
    if k == 0 {
        return Err(Error::InvalidArgument("number of steps must be at least 1".into()));
    }
    check_inputs(target, s, cfg)?;
    if scheme == Scheme::Euclidean {
        require_constant(target)?;
    }
    let start = PointEval::new(target, &s.q, scheme.order())?;
    Ok(integrate_from(target, start, &s.p, cfg, k, scheme)?.0)
}

/// Composition starting from an existing evaluation at `q`; also returns the
/// evaluation at the end point when every step converged.
pub(crate) fn integrate_from<T: Target + ?Sized>(
    target: &T,
    start: PointEval,
    p0: &DVector<f64>,
    cfg: &IntegratorConfig,
    k: usize,
    scheme: Scheme,
) -> Result<(StepResult, Option<PointEval>)> {
    let mut eval = start;
    let mut p = p0.clone();
    let mut log_jacobian = 0.0;
    let mut iters = 0;
    for _ in 0..k {
        let step = step_from(target, &eval, &p, cfg, scheme)?;
        iters += step.result.fp_iters_used;
        log_jacobian += step.result.log_jacobian;
        match step.end {
            Some(end) if step.result.converged => {
                eval = end;
                p = step.result.state.p;
            }
            _ => {
                let r = StepResult {
                    state: step.result.state.flipped(),
                    log_jacobian,
                    converged: false,
                    fp_iters_used: iters,
                };
                return Ok((r, None));
            }
        }
    }
    let r = StepResult {
        state: PhaseState::new(eval.q.clone(), -p),
        log_jacobian,
        converged: true,
        fp_iters_used: iters,
    };
    Ok((r, Some(eval)))
}
