use std::io::Read;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Gamma, StandardNormal};

use super::{logistic, softplus, MetricPolicy, Target};
use crate::error::{Error, Result};
use crate::geometry::{MetricOrder, MetricTerms};
use crate::linalg::SymMatrix;

/// Seed of the bundled synthetic dataset.
pub const BUNDLED_SEED: u64 = 270_014;

const BUNDLED_CSV: &str = include_str!("../../data/logistic_270x14.csv");

/// Design matrix and binary labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticData {
    x: DMatrix<f64>,
    y: Vec<f64>,
    columns: Vec<String>,
}

impl LogisticData {
    pub fn new(x: DMatrix<f64>, y: Vec<f64>) -> Result<Self> {
        if x.nrows() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: x.nrows(),
                found: y.len(),
            });
        }
        if let Some(bad) = y.iter().find(|v| **v != 0.0 && **v != 1.0) {
            return Err(Error::Data(format!("labels must be 0 or 1, found {bad}")));
        }
        let columns = (0..x.ncols()).map(|j| format!("x{j}")).collect();
        Ok(Self { x, y, columns })
    }

    /// Reads a CSV with a header row; the column named `y` holds the labels and
    /// every other column is a covariate.
    pub fn from_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
        Self::from_reader(file, &path.display().to_string())
    }

    /// The 270 × 14 synthetic dataset shipped with the crate, identical to
    /// `synthetic(270, 14, BUNDLED_SEED)`.
    pub fn bundled() -> Self {
        Self::from_reader(BUNDLED_CSV.as_bytes(), "bundled dataset").expect("bundled dataset parses")
    }

    /// Like [`from_csv`](Self::from_csv) for any reader; `name` labels errors.
    pub fn from_reader<R: Read>(input: R, name: &str) -> Result<Self> {
        let mut reader = csv::Reader::from_reader(input);
        let headers = reader
            .headers()
            .map_err(|e| Error::Data(format!("{name}: {e}")))?
            .clone();
        let label_col = headers
            .iter()
            .position(|h| h.trim() == "y")
            .ok_or_else(|| Error::Data(format!("{name}: no column named \"y\"")))?;
        let columns: Vec<String> = headers
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != label_col)
            .map(|(_, h)| h.trim().to_string())
            .collect();

        let mut flat = Vec::new();
        let mut y = Vec::new();
        for (line, record) in reader.records().enumerate() {
            let record = record.map_err(|e| Error::Data(format!("{name}: {e}")))?;
            if record.len() != headers.len() {
                return Err(Error::Data(format!(
                    "{name}: row {} has {} fields, expected {}",
                    line + 2,
                    record.len(),
                    headers.len()
                )));
            }
            for (i, field) in record.iter().enumerate() {
                let v: f64 = field
                    .trim()
                    .parse()
                    .map_err(|_| Error::Data(format!("{name}: row {}: bad number {field:?}", line + 2)))?;
                if i == label_col {
                    y.push(v);
                } else {
                    flat.push(v);
                }
            }
        }
        if y.is_empty() {
            return Err(Error::Data(format!("{name}: no observations")));
        }
        let x = DMatrix::from_row_slice(y.len(), columns.len(), &flat);
        let mut data = Self::new(x, y)?;
        data.columns = columns;
        Ok(data)
    }

    pub fn to_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let err = |e: csv::Error| Error::Data(format!("{}: {e}", path.display()));
        let mut w = csv::Writer::from_path(path).map_err(err)?;
        let mut header = self.columns.clone();
        header.push("y".into());
        w.write_record(&header).map_err(err)?;
        for i in 0..self.n_obs() {
            let mut row: Vec<String> = (0..self.n_covariates())
                .map(|j| format!("{:.17e}", self.x[(i, j)]))
                .collect();
            row.push(format!("{}", self.y[i] as u8));
            w.write_record(&row).map_err(err)?;
        }
        w.flush().map_err(|e| Error::Data(format!("{}: {e}", path.display())))
    }

    /// Synthetic dataset: an intercept column, `m − 1` standard-normal
    /// covariates, and labels drawn from a logistic model with coefficients
    /// `β ~ N(0, 0.5²)`.
    pub fn synthetic(n: usize, m: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let beta: Vec<f64> = (0..m).map(|_| 0.5 * rng.sample::<f64, _>(StandardNormal)).collect();
        let x = DMatrix::from_fn(n, m, |_, j| {
            if j == 0 {
                1.0
            } else {
                rng.sample::<f64, _>(StandardNormal)
            }
        });
        let y = (0..n)
            .map(|i| {
                let eta: f64 = (0..m).map(|j| x[(i, j)] * beta[j]).sum();
                if rng.random::<f64>() < logistic(eta) {
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
        Self::new(x, y).expect("labels are 0/1")
    }

    pub fn n_obs(&self) -> usize {
        self.y.len()
    }

    pub fn n_covariates(&self) -> usize {
        self.x.ncols()
    }

    pub fn design(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn labels(&self) -> &[f64] {
        &self.y
    }
}

/// Hierarchical logistic regression with `α ~ Gamma(ω, θ)` (shape, scale)
/// and `βᵢ | α ~ N(0, 1/α)`.
#[derive(Debug, Clone)]
pub struct HierLogistic {
    data: LogisticData,
    omega: f64,
    theta: f64,
}

pub fn make_hier_logistic(data: LogisticData, omega: f64, theta: f64) -> Result<HierLogistic> {
    if !(omega > 0.0) || !(theta > 0.0) {
        return Err(Error::InvalidArgument("Gamma prior parameters must be positive".into()));
    }
    Ok(HierLogistic { data, omega, theta })
}

impl HierLogistic {
    pub fn data(&self) -> &LogisticData {
        &self.data
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn dim(&self) -> usize {
        self.data.n_covariates()
    }

    /// The target over `β` with the precision held fixed.
    pub fn conditional(&self, alpha: f64) -> LogisticConditional<'_> {
        LogisticConditional {
            data: &self.data,
            alpha,
        }
    }

    pub fn gibbs_alpha<R: Rng + ?Sized>(&self, state: &LogisticGibbsState, rng: &mut R) -> f64 {
        gibbs_alpha_update(state, self.omega, self.theta, rng)
    }
}

/// Joint state of the Metropolis-within-Gibbs sampler.
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticGibbsState {
    pub beta: DVector<f64>,
    pub alpha: f64,
}

/// Exact draw of `α | β ~ Gamma(shape = ω + m/2, rate = 1/θ + ‖β‖²/2)`.
pub fn gibbs_alpha_update<R: Rng + ?Sized>(
    state: &LogisticGibbsState,
    omega: f64,
    theta: f64,
    rng: &mut R,
) -> f64 {
    let shape = omega + 0.5 * state.beta.len() as f64;
    let rate = 1.0 / theta + 0.5 * state.beta.norm_squared();
    rng.sample(Gamma::new(shape, 1.0 / rate).expect("positive Gamma parameters"))
}

/// `π(β | α, X, y)` with the Fisher-plus-prior metric `XᵀΛX + αI`.
#[derive(Debug, Clone, Copy)]
pub struct LogisticConditional<'a> {
    data: &'a LogisticData,
    alpha: f64,
}

impl LogisticConditional<'_> {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    fn linear_predictor(&self, beta: &DVector<f64>) -> DVector<f64> {
        &self.data.x * beta
    }

    /// `Xᵀ diag(w) X`.
    fn weighted_gram(&self, w: &DVector<f64>) -> SymMatrix {
        let x = &self.data.x;
        let xw = DMatrix::from_fn(x.nrows(), x.ncols(), |i, j| x[(i, j)] * w[i]);
        SymMatrix::symmetrize(&(x.transpose() * xw)).expect("square")
    }
}

impl Target for LogisticConditional<'_> {
    fn dim(&self) -> usize {
        self.data.n_covariates()
    }

    fn log_density(&self, beta: &DVector<f64>) -> f64 {
        let eta = self.linear_predictor(beta);
        let ll: f64 = eta
            .iter()
            .zip(&self.data.y)
            .map(|(e, y)| y * e - softplus(*e))
            .sum();
        ll - 0.5 * self.alpha * beta.norm_squared()
    }

    fn grad_log_density(&self, beta: &DVector<f64>) -> DVector<f64> {
        let eta = self.linear_predictor(beta);
        let resid = DVector::from_fn(eta.len(), |i, _| self.data.y[i] - logistic(eta[i]));
        self.data.x.tr_mul(&resid) - beta * self.alpha
    }

    fn metric_policy(&self) -> MetricPolicy {
        MetricPolicy::FisherPlusPrior
    }

    fn metric_terms(&self, beta: &DVector<f64>, order: MetricOrder) -> Result<MetricTerms> {
        let eta = self.linear_predictor(beta);
        let s = eta.map(logistic);
        let lambda = s.map(|si| si * (1.0 - si));
        let m = self.dim();
        let g = self
            .weighted_gram(&lambda)
            .add(&SymMatrix::identity(m).scaled(self.alpha));
        let dg = (order == MetricOrder::WithDerivatives).then(|| {
            (0..m)
                .map(|k| {
                    let w = DVector::from_fn(s.len(), |i, _| {
                        lambda[i] * (1.0 - 2.0 * s[i]) * self.data.x[(i, k)]
                    });
                    self.weighted_gram(&w)
                })
                .collect()
        });
        Ok(MetricTerms { g, dg })
    }
}
