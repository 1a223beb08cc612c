//! Dense complex matrices and the algebra the rest of the crate is built on.
//!
//! All operations are value-semantic: nothing mutates its input, and every
//! type here is `Send + Sync` so sweeps can be evaluated in parallel.

mod expm;
mod permanent;

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use expm::expm2;
pub use permanent::{perm_n, perm_n_with_cap, perm_ryser, DEFAULT_PERM_CAP};

/// Complex scalar used for every matrix entry.
pub type Cplx = Complex64;

/// Default relative tolerance for numeric comparisons.
pub const DEFAULT_TOL: f64 = 1e-10;

const ZERO: Cplx = Cplx::new(0.0, 0.0);
const ONE: Cplx = Cplx::new(1.0, 0.0);

/// Mixed absolute/relative residual `|a − b| / max(1, |a|, |b|)`.
pub fn rel_residual(a: Cplx, b: Cplx) -> f64 {
    (a - b).norm() / 1f64.max(a.norm()).max(b.norm())
}

/// Real-valued version of [`rel_residual`].
pub fn rel_residual_real(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}

/// A 2×2 complex matrix `[[m11, m12], [m21, m22]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat2 {
    pub m11: Cplx,
    pub m12: Cplx,
    pub m21: Cplx,
    pub m22: Cplx,
}

impl Mat2 {
    pub const fn new(m11: Cplx, m12: Cplx, m21: Cplx, m22: Cplx) -> Self {
        Self { m11, m12, m21, m22 }
    }

    /// Like [`Mat2::new`] but rejects NaN or infinite entries.
    pub fn try_new(m11: Cplx, m12: Cplx, m21: Cplx, m22: Cplx) -> Result<Self> {
        let m = Self::new(m11, m12, m21, m22);
        match m.entries().iter().position(|z| !z.is_finite()) {
            Some(idx) => Err(Error::NonFinite(idx)),
            None => Ok(m),
        }
    }

    /// Builds a matrix from real entries, row-major.
    pub fn from_real(rows: [[f64; 2]; 2]) -> Self {
        Self::new(
            rows[0][0].into(),
            rows[0][1].into(),
            rows[1][0].into(),
            rows[1][1].into(),
        )
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn zero() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO)
    }

    /// The exchange matrix `X = [[0, 1], [1, 0]]`.
    pub const fn exchange() -> Self {
        Self::new(ZERO, ONE, ONE, ZERO)
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> [Cplx; 4] {
        [self.m11, self.m12, self.m21, self.m22]
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|z| z.is_finite())
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.m11, self.m21, self.m12, self.m22)
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::new(
            self.m11.conj(),
            self.m21.conj(),
            self.m12.conj(),
            self.m22.conj(),
        )
    }

    pub fn scale(&self, c: Cplx) -> Self {
        Self::new(self.m11 * c, self.m12 * c, self.m21 * c, self.m22 * c)
    }

    pub fn trace(&self) -> Cplx {
        self.m11 + self.m22
    }

    pub fn det(&self) -> Cplx {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        (*self - *other).max_abs()
    }

    /// Entrywise [`rel_residual`], maximised over the four entries.
    pub fn rel_diff(&self, other: &Mat2) -> f64 {
        self.entries()
            .iter()
            .zip(other.entries().iter())
            .map(|(a, b)| rel_residual(*a, *b))
            .fold(0.0, f64::max)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, b: Mat2) -> Mat2 {
        Mat2::new(
            self.m11 * b.m11 + self.m12 * b.m21,
            self.m11 * b.m12 + self.m12 * b.m22,
            self.m21 * b.m11 + self.m22 * b.m21,
            self.m21 * b.m12 + self.m22 * b.m22,
        )
    }
}

impl Add for Mat2 {
    type Output = Mat2;

    fn add(self, b: Mat2) -> Mat2 {
        Mat2::new(
            self.m11 + b.m11,
            self.m12 + b.m12,
            self.m21 + b.m21,
            self.m22 + b.m22,
        )
    }
}

impl Sub for Mat2 {
    type Output = Mat2;

    fn sub(self, b: Mat2) -> Mat2 {
        Mat2::new(
            self.m11 - b.m11,
            self.m12 - b.m12,
            self.m21 - b.m21,
            self.m22 - b.m22,
        )
    }
}

/// Matrix product `a · b`.
pub fn matmul(a: &Mat2, b: &Mat2) -> Mat2 {
    *a * *b
}

/// Row-and-column reversal `X·mᵀ·X = [[m22, m12], [m21, m11]]`.
///
/// The antidiagonal is left untouched.
pub fn row_col_reverse(m: &Mat2) -> Mat2 {
    Mat2::new(m.m22, m.m12, m.m21, m.m11)
}

/// Permanent of a 2×2 matrix: `m11·m22 + m12·m21`.
pub fn perm2(m: &Mat2) -> Cplx {
    m.m11 * m.m22 + m.m12 * m.m21
}

/// Entrywise squared modulus `A ∘ A*`.
pub trait AbsSquare {
    fn abs_square(&self) -> Self;
}

impl AbsSquare for Mat2 {
    fn abs_square(&self) -> Self {
        let sq = |z: Cplx| Cplx::new(z.norm_sqr(), 0.0);
        Mat2::new(sq(self.m11), sq(self.m12), sq(self.m21), sq(self.m22))
    }
}

impl AbsSquare for MatN {
    fn abs_square(&self) -> Self {
        MatN {
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|z| Cplx::new(z.norm_sqr(), 0.0))
                .collect(),
        }
    }
}

/// Hadamard modulus-square; the result has zero imaginary parts.
pub fn hadamard_abs_square<T: AbsSquare>(m: &T) -> T {
    m.abs_square()
}

/// Dense n×n complex matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatN {
    n: usize,
    entries: Vec<Cplx>,
}

impl MatN {
    pub fn new(n: usize, entries: Vec<Cplx>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "matrix dimension must be positive".into(),
            ));
        }
        if entries.len() != n * n {
            return Err(Error::Shape {
                n,
                len: entries.len(),
            });
        }
        if let Some(idx) = entries.iter().position(|z| !z.is_finite()) {
            return Err(Error::NonFinite(idx));
        }
        Ok(Self { n, entries })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Cplx) -> Self {
        assert!(n > 0, "matrix dimension must be positive");
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Self { n, entries }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { ONE } else { ZERO })
    }

    /// Permutation matrix with `P[i][perm[i]] = 1`.
    pub fn permutation(perm: &[usize]) -> Self {
        Self::from_fn(perm.len(), |i, j| if perm[i] == j { ONE } else { ZERO })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Cplx] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Cplx {
        self.entries[i * self.n + j]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, other: &MatN) -> MatN {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        Self::from_fn(n, |i, j| {
            (0..n).map(|k| self.get(i, k) * other.get(k, j)).sum()
        })
    }

    /// Square submatrix on the given rows and columns.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> MatN {
        assert_eq!(rows.len(), cols.len(), "submatrix must be square");
        Self::from_fn(rows.len(), |i, j| self.get(rows[i], cols[j]))
    }

    pub fn max_abs_diff(&self, other: &MatN) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl From<&Mat2> for MatN {
    fn from(m: &Mat2) -> Self {
        MatN {
            n: 2,
            entries: m.entries().to_vec(),
        }
    }
}
