//! Combined-channel construction and the factorizations used under imperfect
//! CSI.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;

use super::LinkGeometry;
use crate::tensor::{khatri_rao, rank_one_svd, ComplexMatrix};
use crate::{Error, Result, C64};

/// `F = H^T ⋄ G`, the `(K M) x N` combined channel. Column `n` is
/// `kron(h_n, g_n)` with `h_n` the `n`-th row of `H` and `g_n` the `n`-th
/// column of `G`, so that `w^H G diag(θ) H q = (q^T ⊗ w^H) F θ`.
pub fn combined_channel(h: &ComplexMatrix, g: &ComplexMatrix) -> Result<ComplexMatrix> {
    if h.rows() != g.cols() {
        return Err(Error::DimensionMismatch {
            op: "combined_channel",
            left: h.shape(),
            right: g.shape(),
        });
    }
    khatri_rao(&h.transpose(), g)
}

/// `rows x cols` matrix of i.i.d. `CN(0, variance)` entries.
pub fn complex_gaussian_matrix<R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    variance: f64,
    rng: &mut R,
) -> Result<ComplexMatrix> {
    if !variance.is_finite() || variance < 0.0 {
        return Err(Error::InvalidParameter(
            "noise variance must be finite and nonnegative",
        ));
    }
    let s = libm::sqrt(variance / 2.0);
    Ok(ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(s * re, s * im)
    }))
}

/// `F + Z` with `Z` i.i.d. `CN(0, sigma_z_sq)`.
pub fn add_estimation_noise<R: Rng + ?Sized>(
    f: &ComplexMatrix,
    sigma_z_sq: f64,
    rng: &mut R,
) -> Result<ComplexMatrix> {
    let z = complex_gaussian_matrix(f.rows(), f.cols(), sigma_z_sq, rng)?;
    if sigma_z_sq == 0.0 {
        return Ok(f.clone());
    }
    f.add(&z)
}

/// Least-squares Khatri-Rao factorization of `F̂ ≈ Ĥ^T ⋄ Ĝ`.
///
/// Column `n` is reshaped into the `K x M` matrix `X_n[k, m] = F̂[m K + k, n]`,
/// which equals `g_n h_n^T` for noiseless data. Its rank-one SVD
/// `σ u v^H` gives `ĝ_n = u` (unit norm) and `ĥ_n = σ v*`, so the complex
/// scale of each column pair is absorbed into `Ĥ` and never corrected.
/// A zero column yields `ĝ_n = e_1`, `ĥ_n = 0`.
///
/// Returns `(Ĥ, Ĝ)` with shapes `N x M` and `K x N`.
pub fn lskrf(f_hat: &ComplexMatrix, k: usize, m: usize) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if k == 0 || m == 0 || f_hat.rows() != k * m {
        return Err(Error::DimensionMismatch {
            op: "lskrf",
            left: f_hat.shape(),
            right: (k * m, f_hat.cols()),
        });
    }
    let n = f_hat.cols();
    let mut h_hat = ComplexMatrix::zeros(n, m);
    let mut g_hat = ComplexMatrix::zeros(k, n);
    for col in 0..n {
        let x = ComplexMatrix::from_col_major(k, m, f_hat.col(col).to_vec())?;
        if x.is_zero() {
            g_hat[(0, col)] = C64::new(1.0, 0.0);
            continue;
        }
        let svd = rank_one_svd(&x)?;
        g_hat.col_mut(col).copy_from_slice(&svd.u);
        for (j, v) in svd.v.iter().enumerate() {
            h_hat[(col, j)] = v.conj() * svd.sigma;
        }
    }
    Ok((h_hat, g_hat))
}

/// Nearest Kronecker product `A ≈ A_y ⊗ A_z` in Frobenius norm, with
/// `A_y` of shape `top` and `A_z` of shape `bottom`.
///
/// Uses the Van Loan-Pitsianis rearrangement: row `i + r1 j` of the
/// `(r1 c1) x (r2 c2)` matrix `R` is `vec` of block `(i, j)` of `A`, so that
/// `R = vec(A_y) vec(A_z)^T` for separable input. The rank-one SVD
/// `σ u v^H` of `R` gives `vec(A_y) = √σ u` and `vec(A_z) = √σ v*`.
pub fn nearest_kron_factor(
    a: &ComplexMatrix,
    top: (usize, usize),
    bottom: (usize, usize),
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let ((r1, c1), (r2, c2)) = (top, bottom);
    if r1 * r2 == 0 || c1 * c2 == 0 || a.shape() != (r1 * r2, c1 * c2) {
        return Err(Error::DimensionMismatch {
            op: "nearest_kron_factor",
            left: a.shape(),
            right: (r1 * r2, c1 * c2),
        });
    }
    let rearranged = ComplexMatrix::from_fn(r1 * c1, r2 * c2, |row, col| {
        let (i, j) = (row % r1, row / r1);
        let (p, q) = (col % r2, col / r2);
        a[(i * r2 + p, j * c2 + q)]
    });
    let svd = rank_one_svd(&rearranged)?;
    let s = libm::sqrt(svd.sigma);
    let a_y = ComplexMatrix::from_col_major(r1, c1, svd.u.iter().map(|z| z * s).collect())?;
    let a_z = ComplexMatrix::from_col_major(r2, c2, svd.v.iter().map(|z| z.conj() * s).collect())?;
    Ok((a_y, a_z))
}

/// Row permutation taking `F = H^T ⋄ G` (rows ordered `(m_y, m_z, k_y, k_z)`)
/// to the ordering `(m_y, k_y, m_z, k_z)` of `kron(F_y, F_z)`.
///
/// Entry `r` of the result is the source row of `F` that lands on row `r`.
/// Columns need no permutation: IRS element `n = n_y N_z + n_z` already
/// matches the column order of `kron(F_y, F_z)`.
pub fn domain_row_permutation(geom: &LinkGeometry) -> Vec<usize> {
    let (my, mz) = (geom.bs.n_y, geom.bs.n_z);
    let (ky, kz) = (geom.ue.n_y, geom.ue.n_z);
    let k = ky * kz;
    let mut perm = Vec::with_capacity(my * mz * k);
    for m_y in 0..my {
        for k_y in 0..ky {
            for m_z in 0..mz {
                for k_z in 0..kz {
                    perm.push((m_y * mz + m_z) * k + k_y * kz + k_z);
                }
            }
        }
    }
    perm
}

/// Per-domain combined channels `(F̂_y, F̂_z)` from a full combined channel.
///
/// Applies [`domain_row_permutation`], under which a separable
/// `F = (H_y ⊗ H_z)^T ⋄ (G_y ⊗ G_z)` becomes `kron(F_y, F_z)` with
/// `F_t = H_t^T ⋄ G_t`, then takes the nearest Kronecker factors. The
/// rank-one projection discards noise outside the separable structure.
/// Shapes are `(K_y M_y) x N_y` and `(K_z M_z) x N_z`.
pub fn extract_domain_combined(
    f_hat: &ComplexMatrix,
    geom: &LinkGeometry,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let (k, m, n) = (geom.ue.total(), geom.bs.total(), geom.irs.total());
    if f_hat.shape() != (k * m, n) {
        return Err(Error::DimensionMismatch {
            op: "extract_domain_combined",
            left: f_hat.shape(),
            right: (k * m, n),
        });
    }
    let perm = domain_row_permutation(geom);
    let permuted = ComplexMatrix::from_fn(k * m, n, |r, c| f_hat[(perm[r], c)]);
    nearest_kron_factor(
        &permuted,
        (geom.ue.n_y * geom.bs.n_y, geom.irs.n_y),
        (geom.ue.n_z * geom.bs.n_z, geom.irs.n_z),
    )
}
