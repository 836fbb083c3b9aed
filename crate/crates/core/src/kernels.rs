//! Markov transition kernels on position space: involutive accept/reject, the
//! HMC family, the Langevin family and the Langevin mixture.
//!
//! Every transition draws exactly one acceptance uniform, whether or not the
//! proposal could be computed, so chains sharing a seed stay aligned.

use nalgebra::DVector;
use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{divergence_drift_from, metric_eval, MetricEval, MetricOrder};
use crate::hamiltonian::{momentum_from, standard_normal, PointEval};
use crate::integrators::{integrate_from, IntegratorConfig, Scheme};
use crate::linalg::{factorize, PdFactor, SymMatrix};
use crate::targets::Target;

#[derive(Debug, Clone, PartialEq)]
pub struct KernelOutcome {
    pub next: DVector<f64>,
    pub proposal: DVector<f64>,
    pub accept_prob: f64,
    pub accepted: bool,
    /// Number of integrator steps drawn; 1 is the single-step branch.
    pub branch: usize,
    /// `accept_prob · ‖proposal − current‖²`.
    pub sq_jump: f64,
    /// The proposal could not be computed (fixed-point failure, singular
    /// update, non-finite values) and was rejected.
    pub diverged: bool,
}

impl KernelOutcome {
    fn new(current: &DVector<f64>, proposal: DVector<f64>, accept_prob: f64, accepted: bool, branch: usize) -> Self {
        let sq = (&proposal - current).norm_squared();
        let sq_jump = if accept_prob > 0.0 { accept_prob * sq } else { 0.0 };
        Self {
            next: if accepted { proposal.clone() } else { current.clone() },
            proposal,
            accept_prob,
            accepted,
            branch,
            sq_jump,
            diverged: false,
        }
    }

    fn rejected<R: Rng + ?Sized>(current: &DVector<f64>, branch: usize, rng: &mut R) -> Self {
        let _: f64 = rng.random();
        Self {
            next: current.clone(),
            proposal: current.clone(),
            accept_prob: 0.0,
            accepted: false,
            branch,
            sq_jump: 0.0,
            diverged: true,
        }
    }
}

/// Involutive Monte Carlo accept step.
/// `α = min{1, exp(log π(proposed) − log π(current) + log_jacobian)}`.
pub fn imc_accept<R: Rng + ?Sized>(
    log_pi_current: f64,
    log_pi_proposed: f64,
    log_jacobian: f64,
    rng: &mut R,
) -> (f64, bool) {
    let log_ratio = log_pi_proposed - log_pi_current + log_jacobian;
    let alpha = if log_ratio.is_nan() || log_pi_proposed == f64::NEG_INFINITY {
        0.0
    } else if log_ratio >= 0.0 {
        1.0
    } else {
        log_ratio.exp()
    };
    let u: f64 = rng.random();
    (alpha, u < alpha)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HmcSpec {
    pub scheme: Scheme,
    pub integrator: IntegratorConfig,
    pub n_steps: usize,
}

/// Momentum refresh, `n_steps` integrator steps with the flip, and an
/// involutive accept on the phase-space density `exp(−H)`.
pub fn hmc_transition<T: Target + ?Sized, R: Rng + ?Sized>(
    target: &T,
    q: &DVector<f64>,
    spec: &HmcSpec,
    rng: &mut R,
) -> Result<KernelOutcome> {
    hmc_branch(target, q, spec, spec.n_steps, rng)
}

fn hmc_branch<T: Target + ?Sized, R: Rng + ?Sized>(
    target: &T,
    q: &DVector<f64>,
    spec: &HmcSpec,
    k: usize,
    rng: &mut R,
) -> Result<KernelOutcome> {
    if k == 0 {
        return Err(Error::InvalidArgument("number of steps must be at least 1".into()));
    }
    spec.integrator.validate()?;
    if spec.scheme == Scheme::Euclidean && !target.metric_policy().is_constant() {
        return Err(Error::InvalidArgument(
            "euclidean leapfrog requires a constant-metric target".into(),
        ));
    }
    let order = match spec.scheme {
        Scheme::Euclidean => MetricOrder::Value,
        _ => MetricOrder::WithDerivatives,
    };
    let start = PointEval::new(target, q, order)?;
    let p = momentum_from(&start.metric, rng)?;
    let h0 = start.hamiltonian(&p);

    let (res, end) = match integrate_from(target, start, &p, &spec.integrator, k, spec.scheme) {
        Ok((res, Some(end))) if res.converged => (res, end),
        _ => return Ok(KernelOutcome::rejected(q, k, rng)),
    };
    let h1 = end.hamiltonian(&res.state.p);
    if !h1.is_finite() || !res.log_jacobian.is_finite() {
        return Ok(KernelOutcome::rejected(q, k, rng));
    }
    let (alpha, accepted) = imc_accept(-h0, -h1, res.log_jacobian, rng);
    Ok(KernelOutcome::new(q, res.state.q, alpha, accepted, k))
}

/// Langevin proposal family `N(q + c(q), ε² A(q))`.
#[derive(Debug, Clone, PartialEq)]
pub enum LangevinVariant {
    /// Fixed preconditioner `A = G⁻¹` for the given constant `G`.
    Mala(SymMatrix),
    /// `A = G⁻¹(q)` with the metric-divergence drift term.
    Mmala,
    /// `A = G⁻¹(q)` without the divergence term.
    Smala,
}

impl LangevinVariant {
    pub fn name(&self) -> &'static str {
        match self {
            LangevinVariant::Mala(_) => "mala",
            LangevinVariant::Mmala => "mmala",
            LangevinVariant::Smala => "smala",
        }
    }
}

struct LangevinPoint {
    log_density: f64,
    mean: DVector<f64>,
    factor: PdFactor,
}

fn langevin_point<T: Target + ?Sized>(
    target: &T,
    q: &DVector<f64>,
    variant: &LangevinVariant,
    fixed: Option<&PdFactor>,
    eps: f64,
) -> Result<LangevinPoint> {
    let log_density = target.log_density(q);
    if !log_density.is_finite() {
        return Err(Error::NonFinite("log density"));
    }
    let grad = target.grad_log_density(q);
    if !grad.iter().all(|x| x.is_finite()) {
        return Err(Error::NonFinite("log density gradient"));
    }
    let half = 0.5 * eps * eps;
    let (factor, drift) = match variant {
        LangevinVariant::Mala(_) => {
            let f = fixed.expect("fixed factor supplied for MALA").clone();
            let d = f.solve(&grad)?;
            (f, d)
        }
        LangevinVariant::Smala => {
            let me = metric_eval(target, q, MetricOrder::Value)?;
            let d = me.solve(&grad);
            (me.factor, d)
        }
        LangevinVariant::Mmala => {
            let me: MetricEval = metric_eval(target, q, MetricOrder::WithDerivatives)?;
            let d = me.solve(&grad) + divergence_drift_from(&me)?;
            (me.factor, d)
        }
    };
    let mean = q + drift * half;
    if !mean.iter().all(|x| x.is_finite()) {
        return Err(Error::NonFinite("proposal mean"));
    }
    Ok(LangevinPoint {
        log_density,
        mean,
        factor,
    })
}

/// Log density of `y` under `N(mean, ε² G⁻¹)` up to the `ε`-dependent
/// constant shared by both directions.
fn proposal_log_density(pt: &LangevinPoint, y: &DVector<f64>, eps: f64) -> Result<f64> {
    let w = pt.factor.transform_transpose(&(y - &pt.mean))?;
    Ok(-0.5 * w.norm_squared() / (eps * eps) + 0.5 * pt.factor.logdet())
}

/// One Metropolis-adjusted Langevin transition with the full asymmetric
/// proposal-density correction.
pub fn langevin_transition<T: Target + ?Sized, R: Rng + ?Sized>(
    target: &T,
    q: &DVector<f64>,
    variant: &LangevinVariant,
    step_size: f64,
    rng: &mut R,
) -> Result<KernelOutcome> {
    if !step_size.is_finite() || step_size == 0.0 {
        return Err(Error::InvalidArgument("langevin step size must be finite and nonzero".into()));
    }
    if q.len() != target.dim() {
        return Err(Error::DimensionMismatch {
            expected: target.dim(),
            found: q.len(),
        });
    }
    let fixed = match variant {
        LangevinVariant::Mala(g) => {
            if g.dim() != q.len() {
                return Err(Error::DimensionMismatch {
                    expected: q.len(),
                    found: g.dim(),
                });
            }
            Some(factorize(g)?)
        }
        _ => None,
    };
    let eps = step_size;
    let cur = langevin_point(target, q, variant, fixed.as_ref(), eps)?;
    let z = standard_normal(q.len(), rng);
    let proposal = &cur.mean + cur.factor.solve_upper(&z)? * eps;

    let prop = match langevin_point(target, &proposal, variant, fixed.as_ref(), eps) {
        Ok(p) => p,
        Err(_) => return Ok(KernelOutcome::rejected(q, 1, rng)),
    };
    let forward = proposal_log_density(&cur, &proposal, eps)?;
    let reverse = proposal_log_density(&prop, q, eps)?;
    let (alpha, accepted) = imc_accept(cur.log_density + forward, prop.log_density + reverse, 0.0, rng);
    Ok(KernelOutcome::new(q, proposal, alpha, accepted, 1))
}

/// Randomized-step mixture whose single-step branch is a Langevin kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureSpec {
    /// Weight of the Langevin branch; 0 selects the unmodified kernel with
    /// uniform weights over `1..=k_max`.
    pub alpha1: f64,
    pub k_max: usize,
    pub scheme: Scheme,
    pub integrator: IntegratorConfig,
    pub langevin: LangevinVariant,
    /// Step size for the Langevin branch; defaults to the integrator's.
    pub langevin_step_size: Option<f64>,
}

impl MixtureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alpha1) {
            return Err(Error::InvalidArgument("alpha1 must lie in [0, 1]".into()));
        }
        if self.k_max < 2 {
            return Err(Error::InvalidArgument("k_max must be at least 2".into()));
        }
        if let Some(e) = self.langevin_step_size {
            if !e.is_finite() || e == 0.0 {
                return Err(Error::InvalidArgument("langevin step size must be finite and nonzero".into()));
            }
        }
        self.integrator.validate()
    }

    /// Branch probabilities; entry `k − 1` is the weight of `k` steps.
    pub fn weights(&self) -> Vec<f64> {
        if self.alpha1 == 0.0 {
            return vec![1.0 / self.k_max as f64; self.k_max];
        }
        let rest = (1.0 - self.alpha1) / (self.k_max - 1) as f64;
        let mut w = vec![rest; self.k_max];
        w[0] = self.alpha1;
        w
    }

    /// Maps a uniform draw in `[0, 1)` to a branch `k ∈ 1..=k_max`.
    pub fn branch_for(&self, u: f64) -> usize {
        let mut acc = 0.0;
        for (i, w) in self.weights().iter().enumerate() {
            acc += w;
            if u < acc {
                return i + 1;
            }
        }
        // Rounding can leave the cumulative sum just below 1.
        self.weights()
            .iter()
            .rposition(|&w| w > 0.0)
            .map_or(self.k_max, |i| i + 1)
    }

    pub fn draw_branch<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.branch_for(rng.random())
    }

    fn hmc(&self) -> HmcSpec {
        HmcSpec {
            scheme: self.scheme,
            integrator: self.integrator,
            n_steps: 1,
        }
    }
}

pub fn mixture_transition<T: Target + ?Sized, R: Rng + ?Sized>(
    target: &T,
    q: &DVector<f64>,
    mix: &MixtureSpec,
    rng: &mut R,
) -> Result<KernelOutcome> {
    mix.validate()?;
    let k = mix.draw_branch(rng);
    if k == 1 && mix.alpha1 > 0.0 {
        let eps = mix.langevin_step_size.unwrap_or(mix.integrator.step_size);
        langevin_transition(target, q, &mix.langevin, eps, rng)
    } else {
        hmc_branch(target, q, &mix.hmc(), k, rng)
    }
}

/// Any of the kernels above, as selected by configuration.
#[derive(Debug, Clone, PartialEq)]
pub enum Kernel {
    Hmc(HmcSpec),
    Langevin { variant: LangevinVariant, step_size: f64 },
    Mixture(MixtureSpec),
}

impl Kernel {
    pub fn transition<T: Target + ?Sized, R: Rng + ?Sized>(
        &self,
        target: &T,
        q: &DVector<f64>,
        rng: &mut R,
    ) -> Result<KernelOutcome> {
        match self {
            Kernel::Hmc(spec) => hmc_transition(target, q, spec, rng),
            Kernel::Langevin { variant, step_size } => langevin_transition(target, q, variant, *step_size, rng),
            Kernel::Mixture(mix) => mixture_transition(target, q, mix, rng),
        }
    }

    /// Largest branch index this kernel can report.
    pub fn max_branch(&self) -> usize {
        match self {
            Kernel::Hmc(spec) => spec.n_steps,
            Kernel::Langevin { .. } => 1,
            Kernel::Mixture(mix) => mix.k_max,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::targets::{make_banana, BananaData, ConstantMetric, Gaussian};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn v(x: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(x)
    }

    #[test]
    fn accept_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(imc_accept(-1.0, -1.0, 0.0, &mut rng), (1.0, true));
        let (a, _) = imc_accept(0.0, -2f64.ln(), 0.0, &mut rng);
        assert!((a - 0.5).abs() < 1e-15);
        for _ in 0..100 {
            assert_eq!(imc_accept(0.0, f64::NEG_INFINITY, 0.0, &mut rng), (0.0, false));
        }
        assert_eq!(imc_accept(0.0, f64::NAN, 0.0, &mut rng).0, 0.0);
    }

    #[test]
    fn accept_consumes_one_uniform() {
        let mut a = ChaCha8Rng::seed_from_u64(5);
        let mut b = ChaCha8Rng::seed_from_u64(5);
        imc_accept(0.0, f64::NEG_INFINITY, 0.0, &mut a);
        let _: f64 = b.random();
        assert_eq!(a.random::<u64>(), b.random::<u64>());
    }

    #[test]
    fn langevin_mean_at_mode() {
        let t = Gaussian::standard(2);
        let pt = langevin_point(&t, &v(&[0.0, 0.0]), &LangevinVariant::Smala, None, 0.5).unwrap();
        assert_eq!(pt.mean, v(&[0.0, 0.0]));
    }

    #[test]
    fn small_step_hmc_accepts() {
        let t = make_banana(20, 2.0, 1.0, BananaData::Generated { seed: 4 }).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let q = v(&[0.3, 0.6]);
        for scheme in [Scheme::Generalized, Scheme::Lagrangian] {
            let spec = HmcSpec {
                scheme,
                integrator: IntegratorConfig::new(1e-8),
                n_steps: 3,
            };
            for _ in 0..20 {
                let out = hmc_transition(&t, &q, &spec, &mut rng).unwrap();
                assert!(out.accept_prob >= 1.0 - 1e-6, "{scheme:?} {}", out.accept_prob);
            }
        }
    }

    #[test]
    fn rejection_leaves_position_unchanged() {
        let t = make_banana(100, 2.0, 1.0, BananaData::Generated { seed: 4 }).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let q = v(&[0.3, 0.6]);
        let spec = HmcSpec {
            scheme: Scheme::Generalized,
            integrator: IntegratorConfig::new(0.5),
            n_steps: 5,
        };
        let mut saw_reject = false;
        for _ in 0..50 {
            let out = hmc_transition(&t, &q, &spec, &mut rng).unwrap();
            assert!((0.0..=1.0).contains(&out.accept_prob));
            if out.accepted {
                assert_eq!(out.next, out.proposal);
            } else {
                saw_reject = true;
                assert_eq!(out.next, q);
            }
        }
        assert!(saw_reject);
    }

    #[test]
    fn constant_metric_kernels_agree() {
        let g = SymMatrix::from_fn(2, |i, j| if i == j { 2.0 } else { 0.5 });
        let t = ConstantMetric::new(Gaussian::standard(2), g.clone()).unwrap();
        let q = v(&[0.7, -0.2]);
        let base = HmcSpec {
            scheme: Scheme::Euclidean,
            integrator: IntegratorConfig::new(0.3),
            n_steps: 4,
        };
        let reference = hmc_transition(&t, &q, &base, &mut ChaCha8Rng::seed_from_u64(8)).unwrap();
        for scheme in [Scheme::Generalized, Scheme::Lagrangian] {
            let spec = HmcSpec { scheme, ..base };
            let out = hmc_transition(&t, &q, &spec, &mut ChaCha8Rng::seed_from_u64(8)).unwrap();
            assert_eq!(out.accepted, reference.accepted);
            assert!((&out.proposal - &reference.proposal).amax() < 1e-12);
            assert!((out.accept_prob - reference.accept_prob).abs() < 1e-12);
        }
        let mm = langevin_transition(&t, &q, &LangevinVariant::Mmala, 0.4, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let sm = langevin_transition(&t, &q, &LangevinVariant::Smala, 0.4, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let ma = langevin_transition(&t, &q, &LangevinVariant::Mala(g), 0.4, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(mm, sm);
        assert!((&mm.proposal - &ma.proposal).amax() < 1e-14);
    }

    #[test]
    fn mixture_weights() {
        let mut mix = MixtureSpec {
            alpha1: 0.1,
            k_max: 4,
            scheme: Scheme::Generalized,
            integrator: IntegratorConfig::new(0.1),
            langevin: LangevinVariant::Mmala,
            langevin_step_size: None,
        };
        let w = mix.weights();
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!((w[1] - 0.3).abs() < 1e-15);
        assert_eq!(mix.branch_for(0.0), 1);
        assert_eq!(mix.branch_for(0.05), 1);
        assert_eq!(mix.branch_for(0.15), 2);
        assert_eq!(mix.branch_for(0.999_999), 4);
        mix.alpha1 = 0.0;
        assert_eq!(mix.weights(), vec![0.25; 4]);
        mix.alpha1 = 1.0;
        assert_eq!(mix.branch_for(0.999_999_999), 1);
        mix.k_max = 1;
        assert!(mix.validate().is_err());
    }

    #[test]
    fn alpha_one_always_langevin() {
        let t = Gaussian::standard(2).with_warp(0.5).unwrap();
        let mix = MixtureSpec {
            alpha1: 1.0,
            k_max: 5,
            scheme: Scheme::Lagrangian,
            integrator: IntegratorConfig::new(0.3),
            langevin: LangevinVariant::Mmala,
            langevin_step_size: None,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut q = v(&[0.1, 0.1]);
        for _ in 0..200 {
            let out = mixture_transition(&t, &q, &mix, &mut rng).unwrap();
            assert_eq!(out.branch, 1);
            q = out.next;
        }
    }
}
