//! Dense third-order complex tensors.
//!
//! Entries are stored with the first index fastest, then the second, then the
//! third: entry `(i, j, k)` of an `I x J x K` tensor lives at
//! `i + I * (j + J * k)`.
//!
//! Unfoldings follow the Kolda-Bader ordering (0-based):
//!
//! | mode | shape         | column of entry `(i, j, k)` |
//! |------|---------------|-----------------------------|
//! | 1    | `I x (J * K)` | `j + J * k`                 |
//! | 2    | `J x (I * K)` | `i + I * k`                 |
//! | 3    | `K x (I * J)` | `i + I * j`                 |
//!
//! so a rank-one `a ∘ b ∘ c` unfolds to `a kron(c, b)^T`, `b kron(c, a)^T`
//! and `c kron(b, a)^T` respectively.

use alloc::vec::Vec;

use crate::tensor::matrix::{ComplexMatrix, ComplexVector};
use crate::tensor::svd::rank_one_svd;
use crate::{Error, Result, C64};

/// Tensor mode selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    One,
    Two,
    Three,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::One, Mode::Two, Mode::Three];

    fn axis(self) -> usize {
        match self {
            Mode::One => 0,
            Mode::Two => 1,
            Mode::Three => 2,
        }
    }
}

impl TryFrom<usize> for Mode {
    type Error = Error;

    fn try_from(mode: usize) -> Result<Self> {
        match mode {
            1 => Ok(Mode::One),
            2 => Ok(Mode::Two),
            3 => Ok(Mode::Three),
            other => Err(Error::InvalidMode(other)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Tensor3 {
    dims: [usize; 3],
    data: Vec<C64>,
}

impl Tensor3 {
    pub fn zeros(i: usize, j: usize, k: usize) -> Self {
        Self {
            dims: [i, j, k],
            data: alloc::vec![C64::new(0.0, 0.0); i * j * k],
        }
    }

    pub fn from_fn(dims: [usize; 3], mut f: impl FnMut(usize, usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dims.iter().product());
        for k in 0..dims[2] {
            for j in 0..dims[1] {
                for i in 0..dims[0] {
                    data.push(f(i, j, k));
                }
            }
        }
        Self { dims, data }
    }

    /// Outer product `a ∘ b ∘ c`.
    pub fn rank_one(a: &[C64], b: &[C64], c: &[C64]) -> Self {
        Self::from_fn([a.len(), b.len(), c.len()], |i, j, k| a[i] * b[j] * c[k])
    }

    pub fn from_vec(dims: [usize; 3], data: Vec<C64>) -> Result<Self> {
        if dims.contains(&0) || data.len() != dims.iter().product::<usize>() {
            return Err(Error::DimensionMismatch {
                op: "Tensor3::from_vec",
                left: (dims[0] * dims[1], dims[2]),
                right: (data.len(), 1),
            });
        }
        Ok(Self { dims, data })
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    /// Entries in storage order (first index fastest).
    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    #[inline]
    fn offset(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.dims[0] * (j + self.dims[1] * k)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> C64 {
        self.data[self.offset(i, j, k)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, value: C64) {
        let o = self.offset(i, j, k);
        self.data[o] = value;
    }

    pub fn frobenius_norm(&self) -> f64 {
        crate::tensor::matrix::norm(&self.data)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }
}

/// Maps the `(K_t M_t) x N_t` combined channel `F = H^T ⋄ G` onto a
/// `K_t x M_t x N_t` tensor with `T[k, m, n] = F[m * K_t + k, n]` (0-based).
///
/// Column `n` of `F` is `kron(h_n, g_n)`, whose row `m * K + k` holds
/// `h_m g_k`, so `T` is the cube of per-element products indexed by
/// (UE antenna, BS antenna, IRS element). With both layouts column-major this
/// is a reinterpretation of the buffer.
pub fn fold_to_tensor(f: &ComplexMatrix, k_t: usize, m_t: usize, n_t: usize) -> Result<Tensor3> {
    if f.rows() != k_t * m_t || f.cols() != n_t {
        return Err(Error::DimensionMismatch {
            op: "fold_to_tensor",
            left: f.shape(),
            right: (k_t * m_t, n_t),
        });
    }
    Tensor3::from_vec([k_t, m_t, n_t], f.as_slice().to_vec())
}

/// Mode-`n` unfolding (see the module docs for the column ordering).
pub fn unfold(t: &Tensor3, mode: Mode) -> ComplexMatrix {
    let [di, dj, dk] = t.dims;
    match mode {
        Mode::One => ComplexMatrix::from_fn(di, dj * dk, |i, col| t.get(i, col % dj, col / dj)),
        Mode::Two => ComplexMatrix::from_fn(dj, di * dk, |j, col| t.get(col % di, j, col / di)),
        Mode::Three => ComplexMatrix::from_fn(dk, di * dj, |k, col| t.get(col % di, col / di, k)),
    }
}

/// Inverse of [`unfold`] for a tensor of shape `dims`.
pub fn fold(m: &ComplexMatrix, mode: Mode, dims: [usize; 3]) -> Result<Tensor3> {
    let axis = mode.axis();
    let expected = (
        dims[axis],
        dims.iter().product::<usize>() / dims[axis].max(1),
    );
    if m.shape() != expected || dims.contains(&0) {
        return Err(Error::DimensionMismatch {
            op: "fold",
            left: m.shape(),
            right: expected,
        });
    }
    let [di, dj, _] = dims;
    Ok(Tensor3::from_fn(dims, |i, j, k| match mode {
        Mode::One => m[(i, j + dj * k)],
        Mode::Two => m[(j, i + di * k)],
        Mode::Three => m[(k, i + di * j)],
    }))
}

/// `T ×_n A`: contracts mode `n` of `t` with the columns of `a`, so that
/// `unfold(result, n) == a * unfold(t, n)`.
pub fn n_mode_product(t: &Tensor3, a: &ComplexMatrix, mode: Mode) -> Result<Tensor3> {
    let axis = mode.axis();
    if a.cols() != t.dims[axis] {
        return Err(Error::DimensionMismatch {
            op: "n_mode_product",
            left: a.shape(),
            right: (t.dims[axis], 1),
        });
    }
    let mut dims = t.dims;
    dims[axis] = a.rows();
    Ok(Tensor3::from_fn(dims, |i, j, k| {
        let idx = [i, j, k];
        (0..t.dims[axis])
            .map(|s| {
                let mut src = idx;
                src[axis] = s;
                a[(idx[axis], s)] * t.get(src[0], src[1], src[2])
            })
            .sum()
    }))
}

/// `T ×_1 u1^H ×_2 u2^H ×_3 u3^H`, the multilinear form maximized by the
/// rank-one HOSVD vectors.
pub fn multilinear_form(t: &Tensor3, u1: &[C64], u2: &[C64], u3: &[C64]) -> Result<C64> {
    if [u1.len(), u2.len(), u3.len()] != t.dims {
        return Err(Error::DimensionMismatch {
            op: "multilinear_form",
            left: (t.dims[0] * t.dims[1], t.dims[2]),
            right: (u1.len() * u2.len(), u3.len()),
        });
    }
    let mut acc = C64::new(0.0, 0.0);
    for (k, z3) in u3.iter().enumerate() {
        for (j, z2) in u2.iter().enumerate() {
            let w = (z3 * z2).conj();
            for (i, z1) in u1.iter().enumerate() {
                acc += z1.conj() * w * t.get(i, j, k);
            }
        }
    }
    Ok(acc)
}

/// Dominant left singular vector of each of the three unfoldings, each unit
/// norm and phase-normalized.
pub fn hosvd_rank_one(t: &Tensor3) -> Result<(ComplexVector, ComplexVector, ComplexVector)> {
    if t.is_zero() {
        return Err(Error::ZeroInput("hosvd_rank_one"));
    }
    let u1 = rank_one_svd(&unfold(t, Mode::One))?.u;
    let u2 = rank_one_svd(&unfold(t, Mode::Two))?.u;
    let u3 = rank_one_svd(&unfold(t, Mode::Three))?.u;
    Ok((u1, u2, u3))
}
