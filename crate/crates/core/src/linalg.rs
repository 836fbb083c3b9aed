//! Dense symmetric positive-definite linear algebra.
//!
//! Every metric in the crate is stored as a [`SymMatrix`] and queried through
//! its Cholesky factor [`PdFactor`]: solves, log-determinants and the
//! `L z` transform used to draw `N(0, S)` variates. No regularization is ever
//! added behind the caller's back; a non-positive pivot is an error.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Absolute tolerance on Cholesky pivots below which a matrix is declared
/// not positive definite.
pub const PIVOT_TOLERANCE: f64 = 1e-12;

/// Square matrix that is symmetric by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    data: DMatrix<f64>,
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            data: DMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            data: DMatrix::identity(dim, dim),
        }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        Self {
            data: DMatrix::from_diagonal(&DVector::from_column_slice(diag)),
        }
    }

    /// Builds the matrix from `f(i, j)` evaluated on the lower triangle
    /// (`i >= j`); the upper triangle is mirrored.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..=i {
                let v = f(i, j);
                data[(i, j)] = v;
                data[(j, i)] = v;
            }
        }
        Self { data }
    }

    /// Reads the lower triangle of `m` and mirrors it.
    pub fn from_lower(m: &DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        Ok(Self::from_fn(m.nrows(), |i, j| m[(i, j)]))
    }

    /// Returns `(m + mᵀ) / 2`, which is exactly symmetric in floating point.
    pub fn symmetrize(m: &DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        Ok(Self::from_fn(m.nrows(), |i, j| 0.5 * (m[(i, j)] + m[(j, i)])))
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.data
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            data: &self.data * c,
        }
    }

    pub fn add(&self, other: &SymMatrix) -> Self {
        Self {
            data: &self.data + &other.data,
        }
    }

    pub fn mul_vec(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.data * v
    }

    /// `vᵀ S v`.
    pub fn quad_form(&self, v: &DVector<f64>) -> f64 {
        v.dot(&(&self.data * v))
    }

    /// `uᵀ S v`.
    pub fn bilinear(&self, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        u.dot(&(&self.data * v))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, x| acc.max(x.abs()))
    }
}

/// Lower-triangular Cholesky factor `L` with `L Lᵀ = S`.
#[derive(Debug, Clone, PartialEq)]
pub struct PdFactor {
    lower: DMatrix<f64>,
}

/// Cholesky factorization of a symmetric matrix.
///
/// Fails with [`Error::NotPositiveDefinite`] when a pivot is not above
/// [`PIVOT_TOLERANCE`] and with [`Error::NonFinite`] on NaN or infinite input.
pub fn factorize(s: &SymMatrix) -> Result<PdFactor> {
    let n = s.dim();
    let a = s.as_matrix();
    let mut l = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if !d.is_finite() {
            return Err(Error::NonFinite("cholesky pivot"));
        }
        if d <= PIVOT_TOLERANCE {
            return Err(Error::NotPositiveDefinite { index: j, pivot: d });
        }
        let ljj = d.sqrt();
        l[(j, j)] = ljj;
        for i in (j + 1)..n {
            let mut v = a[(i, j)];
            for k in 0..j {
                v -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = v / ljj;
        }
    }
    Ok(PdFactor { lower: l })
}

impl PdFactor {
    pub fn dim(&self) -> usize {
        self.lower.nrows()
    }

    pub fn lower(&self) -> &DMatrix<f64> {
        &self.lower
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: n,
            });
        }
        Ok(())
    }

    fn forward(&self, x: &mut [f64]) {
        let l = &self.lower;
        for i in 0..x.len() {
            let mut v = x[i];
            for k in 0..i {
                v -= l[(i, k)] * x[k];
            }
            x[i] = v / l[(i, i)];
        }
    }

    fn backward(&self, x: &mut [f64]) {
        let l = &self.lower;
        let n = x.len();
        for i in (0..n).rev() {
            let mut v = x[i];
            for k in (i + 1)..n {
                v -= l[(k, i)] * x[k];
            }
            x[i] = v / l[(i, i)];
        }
    }

    /// Solves `S x = b`.
    pub fn solve(&self, b: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_len(b.len())?;
        let mut x = b.clone();
        self.forward(x.as_mut_slice());
        self.backward(x.as_mut_slice());
        Ok(x)
    }

    /// Solves `S X = B` column by column.
    pub fn solve_matrix(&self, b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        self.check_len(b.nrows())?;
        let mut x = b.clone();
        for mut col in x.column_iter_mut() {
            let s = col.as_mut_slice();
            self.forward(s);
            self.backward(s);
        }
        Ok(x)
    }

    /// Solves `Lᵀ x = z`. With `z ~ N(0, I)` the result is `N(0, S⁻¹)`.
    pub fn solve_upper(&self, z: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_len(z.len())?;
        let mut x = z.clone();
        self.backward(x.as_mut_slice());
        Ok(x)
    }

    /// `L z`; with `z ~ N(0, I)` the result is `N(0, S)`.
    pub fn transform(&self, z: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_len(z.len())?;
        Ok(&self.lower * z)
    }

    /// `Lᵀ x`, so that `‖Lᵀ x‖² = xᵀ S x`.
    pub fn transform_transpose(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_len(x.len())?;
        Ok(self.lower.tr_mul(x))
    }

    pub fn logdet(&self) -> f64 {
        2.0 * self.lower.diagonal().iter().map(|d| d.ln()).sum::<f64>()
    }

    pub fn inverse(&self) -> SymMatrix {
        let inv = self
            .solve_matrix(&DMatrix::identity(self.dim(), self.dim()))
            .expect("identity has matching dimension");
        SymMatrix::symmetrize(&inv).expect("square")
    }

    /// `L Lᵀ`.
    pub fn reconstruct(&self) -> SymMatrix {
        SymMatrix::symmetrize(&(&self.lower * self.lower.transpose())).expect("square")
    }
}
