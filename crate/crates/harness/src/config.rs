//! Experiment configuration, read from JSON and validated before any work.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TargetConfig {
    Banana {
        #[serde(default = "default_banana_n")]
        n: usize,
        #[serde(default = "default_sigma_y")]
        sigma_y: f64,
        #[serde(default = "default_one")]
        sigma_theta: f64,
        /// Observations; generated from `data_seed` when absent.
        #[serde(default)]
        y: Option<Vec<f64>>,
        #[serde(default = "default_one_u64")]
        data_seed: u64,
    },
    Funnel {
        n: usize,
    },
    StudentT {
        m: usize,
        #[serde(default = "default_nu")]
        nu: f64,
        /// Diagonal of Σ; defaults to `(1, …, 1, 100)`.
        #[serde(default)]
        sigma_diag: Option<Vec<f64>>,
    },
    Logistic {
        /// CSV with a header row and a `y` label column; the bundled
        /// 270 × 14 dataset when absent.
        #[serde(default)]
        data: Option<PathBuf>,
        #[serde(default = "default_omega")]
        omega: f64,
        #[serde(default = "default_theta")]
        theta: f64,
    },
    Gaussian {
        mean: Vec<f64>,
        /// Diagonal covariance; identity when absent.
        #[serde(default)]
        cov_diag: Option<Vec<f64>>,
        #[serde(default)]
        warp: f64,
    },
}

fn default_banana_n() -> usize {
    100
}
fn default_sigma_y() -> f64 {
    2.0
}
fn default_one() -> f64 {
    1.0
}
fn default_one_u64() -> u64 {
    1
}
fn default_nu() -> f64 {
    5.0
}
fn default_omega() -> f64 {
    10.0
}
fn default_theta() -> f64 {
    2.0
}

impl TargetConfig {
    pub fn name(&self) -> &'static str {
        match self {
            TargetConfig::Banana { .. } => "banana",
            TargetConfig::Funnel { .. } => "funnel",
            TargetConfig::StudentT { .. } => "student_t",
            TargetConfig::Logistic { .. } => "logistic",
            TargetConfig::Gaussian { .. } => "gaussian",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelId {
    Ehmc,
    Rmhmc,
    Lmc,
    Mala,
    Mmala,
    Smala,
    Lmrmhmc,
    Lmlmc,
}

impl KernelId {
    pub fn name(&self) -> &'static str {
        match self {
            KernelId::Ehmc => "ehmc",
            KernelId::Rmhmc => "rmhmc",
            KernelId::Lmc => "lmc",
            KernelId::Mala => "mala",
            KernelId::Mmala => "mmala",
            KernelId::Smala => "smala",
            KernelId::Lmrmhmc => "lmrmhmc",
            KernelId::Lmlmc => "lmlmc",
        }
    }

    /// Kernels that run on a fixed mass matrix.
    pub fn is_euclidean(&self) -> bool {
        matches!(self, KernelId::Ehmc | KernelId::Mala)
    }

    pub fn is_mixture(&self) -> bool {
        matches!(self, KernelId::Lmrmhmc | KernelId::Lmlmc)
    }

    /// Randomized-step HMC kernels (`k` uniform on `1..=k_max`).
    pub fn is_hmc(&self) -> bool {
        matches!(self, KernelId::Ehmc | KernelId::Rmhmc | KernelId::Lmc)
    }
}

/// Which Langevin kernel fills the single-step branch of a mixture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum LangevinChoice {
    #[default]
    Mmala,
    Smala,
}

/// Metric used by the kernel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum MetricConfig {
    /// The target's own position-dependent metric; identity mass for the
    /// Euclidean kernels.
    #[default]
    Native,
    Identity,
    Diagonal(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum BandwidthConfig {
    #[default]
    Squared,
    Unsquared,
}

impl From<BandwidthConfig> for geomc::diagnostics::BandwidthMode {
    fn from(b: BandwidthConfig) -> Self {
        match b {
            BandwidthConfig::Squared => geomc::diagnostics::BandwidthMode::Squared,
            BandwidthConfig::Unsquared => geomc::diagnostics::BandwidthMode::Unsquared,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub target: TargetConfig,
    pub kernel: KernelId,
    pub step_size: f64,
    /// Langevin step size; shares `step_size` when absent.
    #[serde(default)]
    pub langevin_step_size: Option<f64>,
    #[serde(default = "default_k_max")]
    pub k_max: usize,
    #[serde(default)]
    pub alpha1: f64,
    #[serde(default)]
    pub langevin: LangevinChoice,
    #[serde(default)]
    pub metric: MetricConfig,
    #[serde(default)]
    pub softabs_alpha: Option<f64>,
    #[serde(default = "default_fp_tol")]
    pub fp_tol: f64,
    #[serde(default = "default_fp_max_iters")]
    pub fp_max_iters: usize,
    pub n_steps: usize,
    #[serde(default = "default_n_chains")]
    pub n_chains: usize,
    #[serde(default = "default_n_reference")]
    pub n_reference: usize,
    #[serde(default)]
    pub base_seed: u64,
    /// Starting point of every chain; the origin when absent.
    #[serde(default)]
    pub initial_point: Option<Vec<f64>>,
    #[serde(default)]
    pub bandwidth: BandwidthConfig,
    #[serde(default = "default_n_projections")]
    pub n_projections: usize,
    /// Worker threads; all available cores when absent.
    #[serde(default)]
    pub n_workers: Option<usize>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

fn default_k_max() -> usize {
    10
}
fn default_fp_tol() -> f64 {
    geomc::integrators::DEFAULT_FP_TOL
}
fn default_fp_max_iters() -> usize {
    geomc::integrators::DEFAULT_FP_MAX_ITERS
}
fn default_n_chains() -> usize {
    1
}
fn default_n_reference() -> usize {
    2000
}
fn default_n_projections() -> usize {
    100
}
fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

fn check(ok: bool, field: &str, message: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(HarnessError::validation(field, message))
    }
}

fn check_positive_list(values: &[f64], field: &str) -> Result<()> {
    check(!values.is_empty(), field, "must not be empty")?;
    check(
        values.iter().all(|v| v.is_finite() && *v > 0.0),
        field,
        "entries must be finite and > 0",
    )
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| HarnessError::validation("config", e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// Target dimension as configured.
    pub fn dim(&self) -> Option<usize> {
        match &self.target {
            TargetConfig::Banana { .. } => Some(2),
            TargetConfig::Funnel { n } => Some(n + 1),
            TargetConfig::StudentT { m, .. } => Some(*m),
            TargetConfig::Gaussian { mean, .. } => Some(mean.len()),
            TargetConfig::Logistic { .. } => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check(self.n_steps >= 1, "n_steps", "n_steps must be ≥ 1")?;
        check(self.n_chains >= 1, "n_chains", "n_chains must be ≥ 1")?;
        check(
            self.step_size.is_finite() && self.step_size > 0.0,
            "step_size",
            "must be finite and > 0",
        )?;
        if let Some(e) = self.langevin_step_size {
            check(e.is_finite() && e > 0.0, "langevin_step_size", "must be finite and > 0")?;
        }
        check(self.k_max >= 1, "k_max", "k_max must be ≥ 1")?;
        if self.kernel.is_mixture() {
            check(self.k_max >= 2, "k_max", "mixture kernels need k_max ≥ 2")?;
        }
        check((0.0..=1.0).contains(&self.alpha1), "alpha1", "must lie in [0, 1]")?;
        check(self.fp_tol.is_finite() && self.fp_tol > 0.0, "fp_tol", "must be finite and > 0")?;
        check(self.fp_max_iters >= 1, "fp_max_iters", "must be ≥ 1")?;
        check(self.n_projections >= 1, "n_projections", "must be ≥ 1")?;
        if let Some(w) = self.n_workers {
            check(w >= 1, "n_workers", "must be ≥ 1")?;
        }
        if let Some(a) = self.softabs_alpha {
            check(a.is_finite() && a > 0.0, "softabs_alpha", "must be finite and > 0")?;
            check(
                matches!(self.target, TargetConfig::Funnel { .. }),
                "softabs_alpha",
                "only the funnel target uses a SoftAbs metric",
            )?;
        }
        match &self.target {
            TargetConfig::Banana { n, sigma_y, sigma_theta, y, .. } => {
                check(*n >= 1, "target.n", "must be ≥ 1")?;
                check(sigma_y.is_finite() && *sigma_y > 0.0, "target.sigma_y", "must be > 0")?;
                check(sigma_theta.is_finite() && *sigma_theta > 0.0, "target.sigma_theta", "must be > 0")?;
                if let Some(y) = y {
                    check(y.len() == *n, "target.y", "length must equal target.n")?;
                    check(y.iter().all(|v| v.is_finite()), "target.y", "entries must be finite")?;
                }
            }
            TargetConfig::Funnel { n } => check(*n >= 1, "target.n", "must be ≥ 1")?,
            TargetConfig::StudentT { m, nu, sigma_diag } => {
                check(*m >= 1, "target.m", "must be ≥ 1")?;
                check(nu.is_finite() && *nu > 2.0, "target.nu", "must be > 2")?;
                if let Some(s) = sigma_diag {
                    check(s.len() == *m, "target.sigma_diag", "length must equal target.m")?;
                    check_positive_list(s, "target.sigma_diag")?;
                }
            }
            TargetConfig::Logistic { omega, theta, .. } => {
                check(omega.is_finite() && *omega > 0.0, "target.omega", "must be > 0")?;
                check(theta.is_finite() && *theta > 0.0, "target.theta", "must be > 0")?;
            }
            TargetConfig::Gaussian { mean, cov_diag, warp } => {
                check(!mean.is_empty(), "target.mean", "must not be empty")?;
                check(mean.iter().all(|v| v.is_finite()), "target.mean", "entries must be finite")?;
                if let Some(c) = cov_diag {
                    check(c.len() == mean.len(), "target.cov_diag", "length must equal target.mean")?;
                    check_positive_list(c, "target.cov_diag")?;
                }
                check(warp.is_finite() && *warp >= 0.0, "target.warp", "must be ≥ 0")?;
            }
        }
        if let MetricConfig::Diagonal(d) = &self.metric {
            check_positive_list(d, "metric.diagonal")?;
            if let Some(m) = self.dim() {
                check(d.len() == m, "metric.diagonal", "length must equal the target dimension")?;
            }
        }
        if let (Some(x0), Some(m)) = (&self.initial_point, self.dim()) {
            check(x0.len() == m, "initial_point", "length must equal the target dimension")?;
        }
        if let Some(x0) = &self.initial_point {
            check(x0.iter().all(|v| v.is_finite()), "initial_point", "entries must be finite")?;
        }
        Ok(())
    }

    /// Additional checks for the MMD curve protocol.
    pub fn validate_for_curve(&self) -> Result<()> {
        self.validate()?;
        check(self.n_chains >= 2, "n_chains", "n_chains must be ≥ 2 for an MMD curve")?;
        check(self.n_reference >= 2, "n_reference", "n_reference must be ≥ 2")
    }
}
