//! Turns a validated config into a target plus kernel that can be stepped.

use geomc::integrators::{IntegratorConfig, Scheme};
use geomc::kernels::{HmcSpec, Kernel, KernelOutcome, LangevinVariant, MixtureSpec};
use geomc::linalg::SymMatrix;
use geomc::targets::{
    make_banana, make_funnel, make_hier_logistic, make_student_t, BananaData, ConstantMetric, Gaussian, HierLogistic,
    LogisticData, LogisticGibbsState, Target,
};
use nalgebra::DVector;
use rand::RngCore;

use crate::config::{ExperimentConfig, KernelId, LangevinChoice, MetricConfig, TargetConfig};
use crate::error::{HarnessError, Result};

enum Posterior {
    Plain(Box<dyn Target>),
    /// Metropolis-within-Gibbs over `(β, α)`; the kernel moves `β`.
    Logistic(HierLogistic),
}

/// A target with its kernel, stepping a state vector in place.
pub struct Sampler {
    posterior: Posterior,
    mass: Option<SymMatrix>,
    kernel: Kernel,
    dim: usize,
    initial: DVector<f64>,
}

impl std::fmt::Debug for Sampler {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Sampler")
            .field("kernel", &self.kernel)
            .field("dim", &self.dim)
            .finish_non_exhaustive()
    }
}

fn build_target(cfg: &ExperimentConfig) -> Result<Posterior> {
    let t: Box<dyn Target> = match &cfg.target {
        TargetConfig::Banana { n, sigma_y, sigma_theta, y, data_seed } => {
            let data = match y {
                Some(y) => BananaData::Observed(y.clone()),
                None => BananaData::Generated { seed: *data_seed },
            };
            Box::new(make_banana(*n, *sigma_y, *sigma_theta, data)?)
        }
        TargetConfig::Funnel { n } => {
            let f = make_funnel(*n)?;
            match cfg.softabs_alpha {
                Some(a) => Box::new(f.with_softabs_alpha(a)?),
                None => Box::new(f),
            }
        }
        TargetConfig::StudentT { m, nu, sigma_diag } => {
            let sigma = sigma_diag.clone().unwrap_or_else(|| {
                let mut s = vec![1.0; *m];
                s[*m - 1] = 100.0;
                s
            });
            Box::new(make_student_t(*m, *nu, &sigma)?)
        }
        TargetConfig::Gaussian { mean, cov_diag, warp } => {
            let cov = cov_diag.clone().unwrap_or_else(|| vec![1.0; mean.len()]);
            let g = Gaussian::new(DVector::from_column_slice(mean), SymMatrix::from_diagonal(&cov))?;
            Box::new(g.with_warp(*warp)?)
        }
        TargetConfig::Logistic { data, omega, theta } => {
            let data = match data {
                Some(path) => LogisticData::from_csv(path)?,
                None => LogisticData::bundled(),
            };
            return Ok(Posterior::Logistic(make_hier_logistic(data, *omega, *theta)?));
        }
    };
    Ok(Posterior::Plain(t))
}

fn build_kernel(cfg: &ExperimentConfig, mass: Option<&SymMatrix>) -> Kernel {
    let integrator = IntegratorConfig::new(cfg.step_size).with_fixed_point(cfg.fp_tol, cfg.fp_max_iters);
    let langevin_step = cfg.langevin_step_size.unwrap_or(cfg.step_size);
    let manifold_langevin = match cfg.langevin {
        LangevinChoice::Mmala => LangevinVariant::Mmala,
        LangevinChoice::Smala => LangevinVariant::Smala,
    };
    let langevin = |id: KernelId| match id {
        KernelId::Mala | KernelId::Ehmc => {
            LangevinVariant::Mala(mass.cloned().expect("euclidean kernels carry a mass matrix"))
        }
        KernelId::Smala => LangevinVariant::Smala,
        KernelId::Mmala => LangevinVariant::Mmala,
        _ => manifold_langevin.clone(),
    };
    let scheme = match cfg.kernel {
        KernelId::Ehmc => Scheme::Euclidean,
        KernelId::Lmc | KernelId::Lmlmc => Scheme::Lagrangian,
        _ => Scheme::Generalized,
    };
    match cfg.kernel {
        KernelId::Mala | KernelId::Mmala | KernelId::Smala => Kernel::Langevin {
            variant: langevin(cfg.kernel),
            step_size: langevin_step,
        },
        id if id.is_hmc() && cfg.k_max == 1 => Kernel::Hmc(HmcSpec {
            scheme,
            integrator,
            n_steps: 1,
        }),
        id => Kernel::Mixture(MixtureSpec {
            alpha1: if id.is_mixture() { cfg.alpha1 } else { 0.0 },
            k_max: cfg.k_max,
            scheme,
            integrator,
            langevin: langevin(id),
            langevin_step_size: cfg.langevin_step_size,
        }),
    }
}

impl Sampler {
    pub fn from_config(cfg: &ExperimentConfig) -> Result<Self> {
        cfg.validate()?;
        if !cfg.kernel.is_mixture() && cfg.alpha1 != 0.0 {
            return Err(HarnessError::validation(
                "alpha1",
                format!("kernel {} has no Langevin branch; alpha1 must be 0", cfg.kernel.name()),
            ));
        }
        let posterior = build_target(cfg)?;
        let beta_dim = match &posterior {
            Posterior::Plain(t) => t.dim(),
            Posterior::Logistic(h) => h.dim(),
        };
        let mass = match &cfg.metric {
            MetricConfig::Native if cfg.kernel.is_euclidean() => Some(SymMatrix::identity(beta_dim)),
            MetricConfig::Native => None,
            MetricConfig::Identity => Some(SymMatrix::identity(beta_dim)),
            MetricConfig::Diagonal(d) => {
                if d.len() != beta_dim {
                    return Err(HarnessError::validation(
                        "metric.diagonal",
                        "length must equal the target dimension",
                    ));
                }
                Some(SymMatrix::from_diagonal(d))
            }
        };
        let posterior = match (posterior, &mass) {
            (Posterior::Plain(t), Some(g)) => Posterior::Plain(Box::new(ConstantMetric::new(t, g.clone())?)),
            (p, _) => p,
        };
        let dim = match &posterior {
            Posterior::Plain(_) => beta_dim,
            Posterior::Logistic(_) => beta_dim + 1,
        };
        let initial = match (&cfg.initial_point, &posterior) {
            (Some(x0), _) => {
                if x0.len() != dim {
                    return Err(HarnessError::validation(
                        "initial_point",
                        format!("length must be {dim}"),
                    ));
                }
                DVector::from_column_slice(x0)
            }
            (None, Posterior::Logistic(h)) => {
                // β at the origin, α at its prior mean.
                let mut x = DVector::zeros(dim);
                x[beta_dim] = h.omega() * h.theta();
                x
            }
            (None, Posterior::Plain(_)) => DVector::zeros(dim),
        };
        if let Posterior::Logistic(_) = &posterior {
            if !(initial[beta_dim] > 0.0) {
                return Err(HarnessError::validation("initial_point", "the precision α must be > 0"));
            }
        }
        let kernel = build_kernel(cfg, mass.as_ref());
        Ok(Self {
            posterior,
            mass,
            kernel,
            dim,
            initial,
        })
    }

    /// Length of the recorded state.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn initial_point(&self) -> &DVector<f64> {
        &self.initial
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn max_branch(&self) -> usize {
        self.kernel.max_branch()
    }

    pub fn has_reference_sampler(&self) -> bool {
        match &self.posterior {
            Posterior::Plain(t) => t.has_reference_sampler(),
            Posterior::Logistic(_) => false,
        }
    }

    pub fn reference_sample(&self, rng: &mut dyn RngCore) -> Option<DVector<f64>> {
        match &self.posterior {
            Posterior::Plain(t) => t.reference_sample(rng),
            Posterior::Logistic(_) => None,
        }
    }

    /// One transition. For the logistic model the kernel moves `β` and an
    /// exact Gibbs draw refreshes `α`; the outcome describes the `β` move.
    pub fn step<R: rand::Rng>(&self, state: &mut DVector<f64>, rng: &mut R) -> Result<KernelOutcome> {
        match &self.posterior {
            Posterior::Plain(t) => {
                let out = self.kernel.transition(t.as_ref(), state, rng)?;
                state.copy_from(&out.next);
                Ok(out)
            }
            Posterior::Logistic(h) => {
                let m = h.dim();
                let beta = state.rows(0, m).into_owned();
                let cond = h.conditional(state[m]);
                let out = match &self.mass {
                    Some(g) => self.kernel.transition(&ConstantMetric::new(cond, g.clone())?, &beta, rng)?,
                    None => self.kernel.transition(&cond, &beta, rng)?,
                };
                let gibbs = LogisticGibbsState {
                    beta: out.next.clone(),
                    alpha: state[m],
                };
                let alpha = h.gibbs_alpha(&gibbs, rng);
                state.rows_mut(0, m).copy_from(&out.next);
                state[m] = alpha;
                Ok(out)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(v: serde_json::Value) -> ExperimentConfig {
        serde_json::from_value(v).unwrap()
    }

    #[test]
    fn kernel_mapping() {
        let base = serde_json::json!({
            "target": {"kind": "banana"}, "kernel": "ehmc", "step_size": 0.1, "n_steps": 5, "k_max": 4
        });
        let s = Sampler::from_config(&cfg(base.clone())).unwrap();
        match s.kernel() {
            Kernel::Mixture(m) => {
                assert_eq!(m.alpha1, 0.0);
                assert_eq!(m.scheme, Scheme::Euclidean);
            }
            k => panic!("{k:?}"),
        }
        let mut v = base.clone();
        v["kernel"] = "lmlmc".into();
        v["alpha1"] = 0.3.into();
        match Sampler::from_config(&cfg(v)).unwrap().kernel() {
            Kernel::Mixture(m) => {
                assert_eq!(m.alpha1, 0.3);
                assert_eq!(m.scheme, Scheme::Lagrangian);
                assert_eq!(m.langevin, LangevinVariant::Mmala);
            }
            k => panic!("{k:?}"),
        }
        let mut v = base.clone();
        v["kernel"] = "rmhmc".into();
        v["k_max"] = 1.into();
        assert!(matches!(Sampler::from_config(&cfg(v)).unwrap().kernel(), Kernel::Hmc(_)));
        let mut v = base;
        v["alpha1"] = 0.5.into();
        assert!(matches!(
            Sampler::from_config(&cfg(v)),
            Err(HarnessError::Validation { .. })
        ));
    }

    #[test]
    fn logistic_state_includes_precision() {
        let c = cfg(serde_json::json!({
            "target": {"kind": "logistic"}, "kernel": "smala", "step_size": 0.1, "n_steps": 3
        }));
        let s = Sampler::from_config(&c).unwrap();
        assert_eq!(s.dim(), 15);
        assert_eq!(s.initial_point()[14], 20.0);
        assert!(!s.has_reference_sampler());
        let mut rng = geomc::chain_rng(0, 0);
        let mut q = s.initial_point().clone();
        s.step(&mut q, &mut rng).unwrap();
        assert!(q[14] > 0.0 && q[14] != 20.0);
    }
}
