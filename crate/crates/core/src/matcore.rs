//! Dense complex matrices and the unbiasedness predicates built on them.
//!
//! Everything in this crate is small (the largest Gram matrix is 72x72), so
//! matrices are plain row-major `Vec`s and comparisons use absolute
//! tolerances. Spectral routines delegate to `nalgebra`.

use std::fmt;
use std::ops::{Index, IndexMut};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// `e^{i theta}`
#[inline]
pub fn phase(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

/// Absolute tolerance used by every approximate comparison.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Tolerance(f64);

impl Tolerance {
    /// Default for construction checks (unitarity, unbiasedness, ER tests).
    pub const CONSTRUCTION: Tolerance = Tolerance(1e-10);
    /// Default for eigenvalue and rank checks.
    pub const SPECTRAL: Tolerance = Tolerance(1e-8);

    pub fn new(eps: f64) -> Result<Self> {
        if eps > 0.0 && eps.is_finite() {
            Ok(Tolerance(eps))
        } else {
            Err(Error::InvalidTolerance(eps))
        }
    }

    #[inline]
    pub fn eps(self) -> f64 {
        self.0
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::CONSTRUCTION
    }
}

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::BadShape {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if let Some(k) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite {
                row: k / cols.max(1),
                col: k % cols.max(1),
            });
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    /// Builds a matrix from nested rows. All rows must have the same length.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::BadShape {
                expected: cols,
                found: bad.len(),
            });
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i] } else { ZERO })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Copy of the `nr x nc` sub-block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> ComplexMatrix {
        Self::from_fn(nr, nc, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &ComplexMatrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)];
            }
        }
    }

    /// Horizontal concatenation `[A | B | ...]`.
    pub fn hstack(parts: &[&ComplexMatrix]) -> Result<ComplexMatrix> {
        let rows = parts.first().map_or(0, |m| m.rows);
        if let Some(bad) = parts.iter().find(|m| m.rows != rows) {
            return Err(Error::DimensionMismatch {
                op: "hstack",
                left: (rows, 0),
                right: bad.shape(),
            });
        }
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = ComplexMatrix::zeros(rows, cols);
        let mut c0 = 0;
        for m in parts {
            out.set_block(0, c0, m);
            c0 += m.cols;
        }
        Ok(out)
    }

    pub fn scale(&self, s: C64) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> ComplexMatrix {
        self.scale(C64::new(s, 0.0))
    }

    pub fn conj(&self) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn transpose(&self) -> ComplexMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> ComplexMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                op: "matmul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let brow = other.row(k);
                let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Entrywise (Hadamard) product.
    pub fn hadamard_product(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.zip_with("hadamard_product", other, |a, b| a * b)
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.zip_with("sub", other, |a, b| a - b)
    }

    pub fn add(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.zip_with("add", other, |a, b| a + b)
    }

    fn zip_with(&self, op: &'static str, other: &ComplexMatrix, f: impl Fn(C64, C64) -> C64) -> Result<ComplexMatrix> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(*a, *b)).collect(),
        })
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |self - other|` entrywise; infinite when shapes differ.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        self.sub(other).map_or(f64::INFINITY, |d| d.max_abs())
    }

    pub fn approx_eq(&self, other: &ComplexMatrix, tol: Tolerance) -> bool {
        self.max_abs_diff(other) <= tol.eps()
    }

    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.max_abs_diff(&self.dagger())
    }

    pub fn is_hermitian(&self, tol: Tolerance) -> bool {
        self.hermitian_deviation() <= tol.eps()
    }

    /// True when every entry has `|Im| <= eps`.
    pub fn is_real(&self, tol: Tolerance) -> bool {
        self.data.iter().all(|z| z.im.abs() <= tol.eps())
    }

    /// `max |M^dagger M - I| <= eps`.
    pub fn is_unitary(&self, tol: Tolerance) -> bool {
        self.unitarity_error() <= tol.eps()
    }

    pub fn unitarity_error(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let g = self.dagger().matmul(self).expect("square");
        g.max_abs_diff(&ComplexMatrix::identity(self.rows))
    }

    /// Unitary with every entry of modulus `1/sqrt(N)`.
    pub fn is_chm(&self, tol: Tolerance) -> bool {
        if !self.is_square() || self.rows == 0 {
            return false;
        }
        let target = 1.0 / (self.rows as f64).sqrt();
        self.is_unitary(tol) && self.data.iter().all(|z| (z.norm() - target).abs() <= tol.eps())
    }

    /// Real spectrum of a hermitian matrix, nondecreasing.
    pub fn eigenvalues_hermitian(&self, tol: Tolerance) -> Result<Vec<f64>> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let dev = self.hermitian_deviation();
        if dev > tol.eps() {
            return Err(Error::NotHermitian(dev));
        }
        // symmetrize so the solver sees an exactly hermitian input
        let sym = self.add(&self.dagger()).expect("same shape").scale_real(0.5);
        let eig = nalgebra::linalg::SymmetricEigen::new(sym.to_nalgebra());
        let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        values.sort_by(f64::total_cmp);
        Ok(values)
    }

    /// Singular values, nonincreasing.
    pub fn singular_values(&self) -> Vec<f64> {
        if self.data.is_empty() {
            return Vec::new();
        }
        let svd = nalgebra::linalg::SVD::new(self.to_nalgebra(), false, false);
        let mut values: Vec<f64> = svd.singular_values.iter().copied().collect();
        values.sort_by(|a, b| b.total_cmp(a));
        values
    }

    /// Number of singular values above `eps * sigma_max`.
    pub fn numeric_rank(&self, tol: Tolerance) -> usize {
        let sv = self.singular_values();
        let Some(&largest) = sv.first() else {
            return 0;
        };
        if largest == 0.0 {
            return 0;
        }
        sv.iter().filter(|&&s| s > tol.eps() * largest).count()
    }

    pub fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub fn from_nalgebra(m: &DMatrix<C64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:>8.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Hermitian inner product `<u, v> = sum conj(u_k) v_k`.
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
