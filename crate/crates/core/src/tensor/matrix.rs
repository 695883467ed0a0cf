//! Dense complex matrices and vectors.
//!
//! [`ComplexMatrix`] stores its entries column by column (the layout `vec(A)`
//! produces). Several reshapes elsewhere in the crate rely on that order, e.g.
//! folding a Khatri-Rao channel into a tensor is a reinterpretation of the
//! same buffer.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Deref, DerefMut, Index, IndexMut};

use crate::{Error, Result, C64};

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from its column-major entry buffer.
    pub fn from_col_major(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                op: "from_col_major",
                left: (rows, cols),
                right: (data.len(), 1),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("from_col_major"));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from row slices, mostly for literals in tests.
    pub fn from_rows(rows: &[&[C64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidParameter("ragged rows"));
        }
        Self::from_col_major(r, c, (0..r * c).map(|idx| rows[idx % r][idx / r]).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for c in 0..cols {
            for r in 0..rows {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Column vector as an `n x 1` matrix.
    pub fn column(v: &[C64]) -> Self {
        Self {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    /// Outer product `a b^T` (no conjugation).
    pub fn outer(a: &[C64], b: &[C64]) -> Self {
        Self::from_fn(a.len(), b.len(), |r, c| a[r] * b[c])
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

    /// Entries in column-major order.
    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn col(&self, c: usize) -> &[C64] {
        &self.data[c * self.rows..(c + 1) * self.rows]
    }

    pub fn col_mut(&mut self, c: usize) -> &mut [C64] {
        &mut self.data[c * self.rows..(c + 1) * self.rows]
    }

    pub fn row(&self, r: usize) -> ComplexVector {
        (0..self.cols).map(|c| self[(r, c)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    /// Hermitian transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "add", |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "sub", |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &Self,
        op: &'static str,
        f: impl Fn(C64, C64) -> C64,
    ) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                op: "matmul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for j in 0..other.cols {
            let dst = &mut out.data[j * self.rows..(j + 1) * self.rows];
            for (k, &b) in other.col(j).iter().enumerate() {
                for (d, &a) in dst.iter_mut().zip(self.col(k)) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `A x`
    pub fn mul_vec(&self, x: &[C64]) -> Result<ComplexVector> {
        if self.cols != x.len() {
            return Err(Error::DimensionMismatch {
                op: "mul_vec",
                left: self.shape(),
                right: (x.len(), 1),
            });
        }
        let mut out = vec![C64::new(0.0, 0.0); self.rows];
        for (c, &xc) in x.iter().enumerate() {
            for (o, &a) in out.iter_mut().zip(self.col(c)) {
                *o += a * xc;
            }
        }
        Ok(ComplexVector(out))
    }

    /// `A^H x`
    pub fn adjoint_mul_vec(&self, x: &[C64]) -> Result<ComplexVector> {
        if self.rows != x.len() {
            return Err(Error::DimensionMismatch {
                op: "adjoint_mul_vec",
                left: (self.cols, self.rows),
                right: (x.len(), 1),
            });
        }
        Ok((0..self.cols).map(|c| dot(self.col(c), x)).collect())
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm(&self.data)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[c * self.rows + r]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[c * self.rows + r]
    }
}

/// A complex column vector.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ComplexVector(pub Vec<C64>);

impl ComplexVector {
    pub fn zeros(n: usize) -> Self {
        Self(vec![C64::new(0.0, 0.0); n])
    }

    pub fn ones(n: usize) -> Self {
        Self(vec![C64::new(1.0, 0.0); n])
    }

    /// Canonical basis vector `e_i`.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = C64::new(1.0, 0.0);
        v
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    /// Unit-norm copy, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0).then(|| self.scale(C64::new(1.0 / n, 0.0)))
    }

    pub fn scale(&self, s: C64) -> Self {
        self.0.iter().map(|z| z * s).collect()
    }

    pub fn conj(&self) -> Self {
        self.0.iter().map(|z| z.conj()).collect()
    }

    /// `self^H other`
    pub fn dot(&self, other: &[C64]) -> C64 {
        dot(&self.0, other)
    }

    pub fn kron(&self, other: &[C64]) -> Self {
        self.0
            .iter()
            .flat_map(|&a| other.iter().map(move |&b| a * b))
            .collect()
    }

    pub fn into_inner(self) -> Vec<C64> {
        self.0
    }
}

impl Deref for ComplexVector {
    type Target = [C64];

    fn deref(&self) -> &[C64] {
        &self.0
    }
}

impl DerefMut for ComplexVector {
    fn deref_mut(&mut self) -> &mut [C64] {
        &mut self.0
    }
}

impl From<Vec<C64>> for ComplexVector {
    fn from(v: Vec<C64>) -> Self {
        Self(v)
    }
}

impl FromIterator<C64> for ComplexVector {
    fn from_iter<I: IntoIterator<Item = C64>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

/// `x^H y`
pub fn dot(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm(x: &[C64]) -> f64 {
    libm::sqrt(x.iter().map(|z| z.norm_sqr()).sum::<f64>())
}

/// Kronecker product `A ⊗ B`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = b.shape();
    ComplexMatrix::from_fn(a.rows * br, a.cols * bc, |r, c| {
        a[(r / br, c / bc)] * b[(r % br, c % bc)]
    })
}

/// Column-wise Kronecker product: column `n` of the result is
/// `kron(a[:, n], b[:, n])`.
pub fn khatri_rao(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.cols != b.cols {
        return Err(Error::DimensionMismatch {
            op: "khatri_rao",
            left: a.shape(),
            right: b.shape(),
        });
    }
    let mut data = Vec::with_capacity(a.rows * b.rows * a.cols);
    for n in 0..a.cols {
        for &x in a.col(n) {
            data.extend(b.col(n).iter().map(|&y| x * y));
        }
    }
    Ok(ComplexMatrix {
        rows: a.rows * b.rows,
        cols: a.cols,
        data,
    })
}

/// Elementwise product.
pub fn hadamard(a: &[C64], b: &[C64]) -> Result<ComplexVector> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            op: "hadamard",
            left: (a.len(), 1),
            right: (b.len(), 1),
        });
    }
    Ok(a.iter().zip(b).map(|(x, y)| x * y).collect())
}
