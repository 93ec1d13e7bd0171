//! Dense complex linear algebra at desk scale.
//!
//! Everything here works on small matrices (dimension up to ~128), so the
//! eigensolver is a cyclic complex Jacobi iteration: slow asymptotically but
//! unconditionally convergent and accurate to a few ulps on Hermitian input.
//! Singular values and the spectral norm are derived from the eigenvalues of
//! the smaller Gram matrix.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on `max |H - H^dagger|` for a matrix to count as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues down to this (negative) value are clamped to zero by [`psd_sqrt`].
pub const PSD_CLAMP: f64 = 1e-10;

/// Jacobi stops once the off-diagonal Frobenius mass drops below this
/// fraction of the initial Frobenius norm.
const JACOBI_REL_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense row-major matrix of double-precision complex numbers.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    ///
    /// Empty shapes are representable (so that callers can be told about
    /// them), but every numerical routine rejects them.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::shape(
                format!("{} entries for a {rows}x{cols} matrix", rows * cols),
                format!("{} entries", data.len()),
            ));
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite entry at ({}, {})",
                pos / cols.max(1),
                pos % cols.max(1)
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Diagonal matrix with real entries.
    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::shape(format!("rows of length {c}"), format!("a row of length {}", bad.len())));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Convenience constructor for real matrices.
    pub fn from_real(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[Vec<Complex64>]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        if let Some(bad) = columns.iter().find(|c| c.len() != rows) {
            return Err(Error::shape(format!("columns of length {rows}"), format!("a column of length {}", bad.len())));
        }
        let mut m = Self::zeros(rows, cols);
        for (j, col) in columns.iter().enumerate() {
            for (i, &z) in col.iter().enumerate() {
                m[(i, j)] = z;
            }
        }
        Ok(m)
    }

    /// Outer product `|x><y|`.
    pub fn outer(x: &[Complex64], y: &[Complex64]) -> Self {
        let mut m = Self::zeros(x.len(), y.len());
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                m[(i, j)] = xi * yj.conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        self.data.chunks(self.cols.max(1)).map(<[_]>::to_vec).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`; `INFINITY` on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.shape() != other.shape() {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |H - H^dagger|` entrywise; `INFINITY` for non-square input.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut dev = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// `max |U^dagger U - I|` entrywise; `INFINITY` for non-square input.
    pub fn unitary_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (&self.adjoint() * self).max_abs_diff(&Self::identity(self.rows))
    }

    /// Copy of `self` embedded in the top-left corner of a larger zero matrix.
    pub fn zero_padded(&self, rows: usize, cols: usize) -> Result<Self> {
        if rows < self.rows || cols < self.cols {
            return Err(Error::InvalidInput(format!(
                "cannot pad a {}x{} matrix to {rows}x{cols}",
                self.rows, self.cols
            )));
        }
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)];
            }
        }
        Ok(out)
    }

    /// Entry-level submatrix with the given (already validated) row and column indices.
    pub fn select(&self, row_idx: &[usize], col_idx: &[usize]) -> Result<Self> {
        if let Some(&i) = row_idx.iter().find(|&&i| i >= self.rows) {
            return Err(Error::InvalidInput(format!("row index {i} out of range for {} rows", self.rows)));
        }
        if let Some(&j) = col_idx.iter().find(|&&j| j >= self.cols) {
            return Err(Error::InvalidInput(format!("column index {j} out of range for {} columns", self.cols)));
        }
        let mut out = Self::zeros(row_idx.len(), col_idx.len());
        for (a, &i) in row_idx.iter().enumerate() {
            for (b, &j) in col_idx.iter().enumerate() {
                out[(a, b)] = self[(i, j)];
            }
        }
        Ok(out)
    }

    fn ensure_same_shape(&self, other: &Self) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::shape(
                format!("{}x{}", self.rows, self.cols),
                format!("{}x{}", other.rows, other.cols),
            ));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.ensure_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.ensure_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::shape(
                format!("left operand with {} columns", other.rows),
                format!("{}x{}", self.rows, self.cols),
            ));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(*a, *b)).collect(),
        }
    }

    /// Gram matrix on the smaller side: `M M^dagger` if rows <= cols, else `M^dagger M`.
    /// Both share their non-zero eigenvalues.
    fn small_gram(&self) -> Self {
        let (m, n) = self.shape();
        if m <= n {
            let mut g = Self::zeros(m, m);
            for i in 0..m {
                let ri = &self.data[i * n..(i + 1) * n];
                for j in i..m {
                    let rj = &self.data[j * n..(j + 1) * n];
                    let s: Complex64 = ri.iter().zip(rj).map(|(a, b)| a * b.conj()).sum();
                    g[(i, j)] = s;
                    g[(j, i)] = s.conj();
                }
            }
            g
        } else {
            let mut g = Self::zeros(n, n);
            for r in 0..m {
                let row = &self.data[r * n..(r + 1) * n];
                for i in 0..n {
                    let a = row[i].conj();
                    if a == ZERO {
                        continue;
                    }
                    for j in i..n {
                        g.data[i * n + j] += a * row[j];
                    }
                }
            }
            for i in 0..n {
                g.data[i * n + i].im = 0.0;
                for j in (i + 1)..n {
                    g.data[j * n + i] = g.data[i * n + j].conj();
                }
            }
            g
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    /// Panics on incompatible shapes; use [`ComplexMatrix::try_mul`] for fallible code.
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_sub(rhs).expect("matrix difference shape mismatch")
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Shape of a matrix of `block_rows x block_cols` square blocks of size `block_dim`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockIndex {
    pub block_rows: usize,
    pub block_cols: usize,
    pub block_dim: usize,
}

impl BlockIndex {
    pub fn new(block_rows: usize, block_cols: usize, block_dim: usize) -> Result<Self> {
        if block_rows == 0 || block_cols == 0 || block_dim == 0 {
            return Err(Error::InvalidInput("block index dimensions must be positive".into()));
        }
        Ok(Self {
            block_rows,
            block_cols,
            block_dim,
        })
    }

    /// Checks that `m` has exactly the shape this index describes.
    pub fn check(&self, m: &ComplexMatrix) -> Result<()> {
        let expected = (self.block_rows * self.block_dim, self.block_cols * self.block_dim);
        if m.shape() != expected {
            return Err(Error::shape(
                format!("{}x{} (blocks {}x{} of size {})", expected.0, expected.1, self.block_rows, self.block_cols, self.block_dim),
                format!("{}x{}", m.rows(), m.cols()),
            ));
        }
        Ok(())
    }
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// Eigenvector belonging to the `i`-th largest eigenvalue.
    pub fn vector(&self, i: usize) -> Vec<Complex64> {
        self.vectors.column(i)
    }
}

fn ensure_nonempty(m: &ComplexMatrix) -> Result<()> {
    if m.is_empty() {
        return Err(Error::InvalidInput(format!("empty {}x{} matrix", m.rows(), m.cols())));
    }
    Ok(())
}

/// Cyclic Jacobi on a Hermitian matrix stored row-major in `a` (size `n`).
/// On return the diagonal of `a` holds the eigenvalues; `v` (if given,
/// initialised to the identity) accumulates the eigenvectors as columns.
fn jacobi_in_place(a: &mut [Complex64], n: usize, mut v: Option<&mut [Complex64]>) {
    let total: f64 = a.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
    let tol = JACOBI_REL_TOL * total;
    if n < 2 || tol == 0.0 {
        return;
    }
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    off += a[p * n + q].norm_sqr();
                }
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let g = a[p * n + q];
                let ag = g.norm();
                if ag == 0.0 {
                    continue;
                }
                let u = g / ag;
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let theta = (aqq - app) / (2.0 * ag);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                    sign / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // J restricted to (p, q) is [[c, s], [-s conj(u), c conj(u)]].
                let j10 = -s * u.conj();
                let j11 = c * u.conj();
                for k in 0..n {
                    let x = a[k * n + p];
                    let y = a[k * n + q];
                    a[k * n + p] = x * c + y * j10;
                    a[k * n + q] = x * s + y * j11;
                }
                for k in 0..n {
                    let x = a[p * n + k];
                    let y = a[q * n + k];
                    a[p * n + k] = x * c + y * j10.conj();
                    a[q * n + k] = x * s + y * j11.conj();
                }
                a[p * n + q] = ZERO;
                a[q * n + p] = ZERO;
                a[p * n + p].im = 0.0;
                a[q * n + q].im = 0.0;
                if let Some(v) = v.as_deref_mut() {
                    for k in 0..n {
                        let x = v[k * n + p];
                        let y = v[k * n + q];
                        v[k * n + p] = x * c + y * j10;
                        v[k * n + q] = x * s + y * j11;
                    }
                }
            }
        }
    }
}

/// Eigenvalues (descending) of a matrix already known to be Hermitian.
fn hermitian_values_unchecked(h: &ComplexMatrix) -> Vec<f64> {
    let n = h.rows();
    let mut a = h.data.clone();
    jacobi_in_place(&mut a, n, None);
    let mut values: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    values.sort_by(|x, y| y.total_cmp(x));
    values
}

/// Largest eigenvalue of a matrix already known to be Hermitian.
pub(crate) fn max_eigenvalue_unchecked(h: &ComplexMatrix) -> f64 {
    let n = h.rows();
    if n == 1 {
        return h[(0, 0)].re;
    }
    let mut a = h.data.clone();
    jacobi_in_place(&mut a, n, None);
    (0..n).map(|i| a[i * n + i].re).fold(f64::NEG_INFINITY, f64::max)
}

fn hermitian_eig_unchecked(h: &ComplexMatrix) -> HermitianEigen {
    let n = h.rows();
    let mut a = h.data.clone();
    let mut v = ComplexMatrix::identity(n).data;
    jacobi_in_place(&mut a, n, Some(&mut v));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].re.total_cmp(&a[i * n + i].re));
    let values = order.iter().map(|&i| a[i * n + i].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for k in 0..n {
            vectors[(k, dst)] = v[k * n + src];
        }
    }
    HermitianEigen { values, vectors }
}

/// Singular values in descending order; `min(rows, cols)` of them.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    ensure_nonempty(m)?;
    Ok(hermitian_values_unchecked(&m.small_gram())
        .into_iter()
        .map(|l| l.max(0.0).sqrt())
        .collect())
}

/// Largest singular value.
pub fn spectral_norm(m: &ComplexMatrix) -> Result<f64> {
    ensure_nonempty(m)?;
    Ok(spectral_norm_unchecked(m))
}

pub(crate) fn spectral_norm_unchecked(m: &ComplexMatrix) -> f64 {
    if m.data.iter().all(|z| *z == ZERO) {
        return 0.0;
    }
    max_eigenvalue_unchecked(&m.small_gram()).max(0.0).sqrt()
}

fn ensure_hermitian(h: &ComplexMatrix) -> Result<()> {
    ensure_nonempty(h)?;
    if !h.is_square() {
        return Err(Error::shape("a square matrix", format!("{}x{}", h.rows(), h.cols())));
    }
    let asymmetry = h.hermitian_deviation();
    if asymmetry > HERMITIAN_TOL {
        return Err(Error::NotHermitian { asymmetry });
    }
    Ok(())
}

/// Eigenvalues (descending) and orthonormal eigenvectors of a Hermitian matrix.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<HermitianEigen> {
    ensure_hermitian(h)?;
    Ok(hermitian_eig_unchecked(h))
}

/// Positive square root of a positive semidefinite matrix.
///
/// Eigenvalues in `[-1e-10, 0)` are treated as zero; anything more negative
/// is rejected.
pub fn psd_sqrt(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(h)?;
    let lowest = eig.values.last().copied().unwrap_or(0.0);
    if lowest < -PSD_CLAMP {
        return Err(Error::NotPositive { eigenvalue: lowest });
    }
    let n = h.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for (k, &lambda) in eig.values.iter().enumerate() {
        let root = lambda.max(0.0).sqrt();
        if root == 0.0 {
            continue;
        }
        for i in 0..n {
            let vi = eig.vectors[(i, k)] * root;
            for j in 0..n {
                out[(i, j)] += vi * eig.vectors[(j, k)].conj();
            }
        }
    }
    // Symmetrise away rounding noise.
    let adj = out.adjoint();
    Ok((&out + &adj).scale_real(0.5))
}

/// Hilbert-Schmidt inner product `tr(X^dagger Y)`.
pub fn hs_inner(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<Complex64> {
    x.ensure_same_shape(y)?;
    Ok(x.data.iter().zip(&y.data).map(|(a, b)| a.conj() * b).sum())
}

/// Stacks matrices with equal column counts on top of each other.
pub fn stack_vertical(blocks: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let first = blocks
        .first()
        .ok_or_else(|| Error::InvalidInput("cannot stack an empty list of blocks".into()))?;
    let cols = first.cols();
    let mut data = Vec::with_capacity(blocks.iter().map(|b| b.data.len()).sum());
    let mut rows = 0;
    for b in blocks {
        if b.cols() != cols {
            return Err(Error::shape(format!("blocks with {cols} columns"), format!("a block with {} columns", b.cols())));
        }
        rows += b.rows();
        data.extend_from_slice(&b.data);
    }
    ComplexMatrix::new(rows, cols, data)
}

fn validate_block_set(set: &[usize], bound: usize, what: &str) -> Result<()> {
    if set.is_empty() {
        return Err(Error::InvalidInput(format!("empty {what} set")));
    }
    if let Some(&i) = set.iter().find(|&&i| i >= bound) {
        return Err(Error::InvalidInput(format!("{what} index {i} out of range (< {bound})")));
    }
    if set.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput(format!("{what} set must be strictly increasing: {set:?}")));
    }
    Ok(())
}

/// Block submatrix keeping the blocks at the intersection of `row_set` and
/// `col_set` (zero-based, strictly increasing block indices).
pub fn block_submatrix(
    m: &ComplexMatrix,
    idx: BlockIndex,
    row_set: &[usize],
    col_set: &[usize],
) -> Result<ComplexMatrix> {
    idx.check(m)?;
    validate_block_set(row_set, idx.block_rows, "block row")?;
    validate_block_set(col_set, idx.block_cols, "block column")?;
    let d = idx.block_dim;
    let expand = |set: &[usize]| -> Vec<usize> { set.iter().flat_map(|&b| b * d..(b + 1) * d).collect() };
    m.select(&expand(row_set), &expand(col_set))
}
