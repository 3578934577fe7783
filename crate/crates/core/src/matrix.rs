//! Dense complex matrices and the handful of operations the cloning
//! machinery needs: tensor products, adjoints, partial traces over an
//! arbitrary factor list, and realization of vectors from a Gram matrix.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{CloneError, Result};

pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Eigenvalue cutoff used when realizing machine states from a Gram matrix.
pub const GRAM_TOL: f64 = 1e-10;

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(CloneError::Dimension(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(CloneError::Dimension(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(k) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(CloneError::NonFinite {
                row: k / cols,
                col: k % cols,
            });
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    /// Column vector holding `v`.
    pub fn column_vector(v: &[Complex64]) -> Self {
        ComplexMatrix {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    /// `|v⟩⟨v|`
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.data[i * self.cols + j] = z;
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &ComplexMatrix) -> Self {
        let (rb, cb) = (other.rows, other.cols);
        Self::from_fn(self.rows * rb, self.cols * cb, |i, j| {
            self.get(i / rb, j / cb) * other.get(i % rb, j % cb)
        })
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(CloneError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &ComplexMatrix, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(CloneError::Dimension(format!(
                "shape {}x{} does not match {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn try_add(&self, other: &ComplexMatrix) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &ComplexMatrix) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        self.try_sub(other).map(|d| d.max_abs()).unwrap_or(f64::INFINITY)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (i..self.cols).all(|j| (self.get(i, j) - self.get(j, i).conj()).norm() <= tol))
    }

    /// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
    ///
    /// Only the Hermitian part `(A + A†)/2` is decomposed.
    pub fn hermitian_eigen(&self) -> Result<HermitianEigen> {
        if !self.is_square() {
            return Err(CloneError::Dimension(format!(
                "eigen-decomposition needs a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let m = DMatrix::from_fn(n, n, |i, j| (self.get(i, j) + self.get(j, i).conj()) * 0.5);
        let eig = SymmetricEigen::new(m);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = Self::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
        Ok(HermitianEigen { values, vectors })
    }

    pub fn eigenvalues_hermitian(&self) -> Result<Vec<f64>> {
        Ok(self.hermitian_eigen()?.values)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self.get(i, j);
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// Panics on shape mismatch; use [`ComplexMatrix::matmul`] to get an error instead.
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix product shape mismatch")
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

/// Result of [`ComplexMatrix::hermitian_eigen`]; column `k` of `vectors`
/// belongs to `values[k]`.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

pub fn dagger(a: &ComplexMatrix) -> ComplexMatrix {
    a.dagger()
}

/// `⟨u|v⟩`, conjugate-linear in the first argument.
pub fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// Factor dimensions of a tensor-product space, outermost factor first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubsystemLayout {
    dims: Vec<usize>,
}

impl SubsystemLayout {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(CloneError::Dimension(format!("invalid factor dimensions {dims:?}")));
        }
        Ok(SubsystemLayout { dims })
    }

    /// A single factor of dimension `n`.
    pub fn single(n: usize) -> Self {
        SubsystemLayout { dims: vec![n.max(1)] }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    /// Layout made of the factors listed in `keep`, in ascending factor order.
    pub fn restrict(&self, keep: &[usize]) -> Self {
        let mut idx = keep.to_vec();
        idx.sort_unstable();
        idx.dedup();
        SubsystemLayout {
            dims: idx.iter().map(|&k| self.dims[k]).collect(),
        }
    }
}

/// Traces out every factor not listed in `keep`.
///
/// Kept factors appear in ascending order in the result regardless of the
/// order given in `keep`.
pub fn partial_trace(m: &ComplexMatrix, layout: &SubsystemLayout, keep: &[usize]) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(CloneError::Dimension(format!(
            "partial trace needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if layout.total() != m.rows() {
        return Err(CloneError::Dimension(format!(
            "layout {:?} spans {} but matrix is {}x{}",
            layout.dims(),
            layout.total(),
            m.rows(),
            m.cols()
        )));
    }
    if keep.is_empty() {
        return Err(CloneError::Dimension("at least one factor must be kept".into()));
    }
    let n_factors = layout.len();
    let mut kept = vec![false; n_factors];
    for &k in keep {
        if k >= n_factors {
            return Err(CloneError::Dimension(format!(
                "factor {k} out of range for {n_factors} factors"
            )));
        }
        if kept[k] {
            return Err(CloneError::Dimension(format!("factor {k} listed twice")));
        }
        kept[k] = true;
    }

    let dims = layout.dims();
    let n = m.rows();
    // Split every full index into (kept index, traced index).
    let split: Vec<(usize, usize)> = (0..n)
        .map(|full| {
            let mut rem = full;
            let mut digits = vec![0usize; n_factors];
            for f in (0..n_factors).rev() {
                digits[f] = rem % dims[f];
                rem /= dims[f];
            }
            let (mut k_idx, mut t_idx) = (0usize, 0usize);
            for f in 0..n_factors {
                if kept[f] {
                    k_idx = k_idx * dims[f] + digits[f];
                } else {
                    t_idx = t_idx * dims[f] + digits[f];
                }
            }
            (k_idx, t_idx)
        })
        .collect();

    let out_dim: usize = (0..n_factors).filter(|&f| kept[f]).map(|f| dims[f]).product();
    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    for (i, &(ki, ti)) in split.iter().enumerate() {
        for (j, &(kj, tj)) in split.iter().enumerate() {
            if ti == tj {
                let z = out.get(ki, kj) + m.get(i, j);
                out.set(ki, kj, z);
            }
        }
    }
    Ok(out)
}

/// Matrix of pairwise inner products `G[i][j] = ⟨v_i|v_j⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix {
    entries: ComplexMatrix,
}

impl GramMatrix {
    /// Rejects matrices that are not Hermitian within 1e-12. Positivity is
    /// checked by [`gram_vectors`].
    pub fn new(entries: ComplexMatrix) -> Result<Self> {
        if !entries.is_hermitian(1e-12) {
            return Err(CloneError::Dimension("gram matrix must be square and Hermitian".into()));
        }
        Ok(GramMatrix { entries })
    }

    /// Gram matrix of the given vectors.
    pub fn of_vectors(vectors: &[Vec<Complex64>]) -> Self {
        let n = vectors.len();
        GramMatrix {
            entries: ComplexMatrix::from_fn(n, n, |i, j| inner(&vectors[i], &vectors[j])),
        }
    }

    pub fn size(&self) -> usize {
        self.entries.rows()
    }

    pub fn entries(&self) -> &ComplexMatrix {
        &self.entries
    }
}

/// Vectors whose pairwise inner products reproduce `g`.
///
/// The vector dimension equals the number of eigenvalues above `tol`; any
/// eigenvalue below `-tol` means no such vectors exist.
pub fn gram_vectors(g: &GramMatrix, tol: f64) -> Result<Vec<Vec<Complex64>>> {
    let HermitianEigen { values, vectors } = g.entries.hermitian_eigen()?;
    if let Some(&min) = values.first() {
        if min < -tol {
            return Err(CloneError::NotRealizable {
                min_eigenvalue: min,
                tol,
            });
        }
    }
    let retained: Vec<(usize, f64)> = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > tol)
        .map(|(k, &v)| (k, v.sqrt()))
        .collect();
    let n = g.size();
    // G = U Λ U†, so v_i[k] = conj(U[i][k]) √λ_k gives ⟨v_i|v_j⟩ = G[i][j].
    Ok((0..n)
        .map(|i| {
            if retained.is_empty() {
                vec![ZERO]
            } else {
                retained.iter().map(|&(k, s)| vectors.get(i, k).conj() * s).collect()
            }
        })
        .collect())
}

/// `V†V = I` within `tol` on the max-abs entry.
pub fn is_isometry(v: &ComplexMatrix, tol: f64) -> bool {
    if v.rows() < v.cols() {
        return false;
    }
    let vv = &v.dagger() * v;
    vv.max_abs_diff(&ComplexMatrix::identity(v.cols())) <= tol
}
