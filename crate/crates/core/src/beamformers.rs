//! Joint active (precoder `q`, combiner `w`) and passive (IRS phases `θ`)
//! beamforming designers.
//!
//! All three maximize `|w^H G diag(θ) H q|` subject to `‖w‖ = ‖q‖ = 1` and
//! `|θ_n| = 1`:
//!
//! - [`baseline_full`] works on the full channel matrices,
//! - [`kf_design`] solves the horizontal and vertical sub-problems with
//!   rank-one SVDs of the per-domain channel factors,
//! - [`tot_design`] solves them with the rank-one HOSVD of the per-domain
//!   combined channel tensors.
//!
//! The two structured designers return `w = w_y ⊗ w_z`, `q = q_y ⊗ q_z` and
//! `θ = θ_y ⊗ θ_z`.

use core::fmt;

use crate::tensor::{
    hadamard, hosvd_rank_one, rank_one_svd, ComplexMatrix, ComplexVector, Tensor3,
};
use crate::{Error, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    /// SVD of the full `H` and `G`.
    Baseline,
    /// Per-domain SVD (Kronecker factorization).
    Kf,
    /// Per-domain rank-one tensor approximation.
    Tot,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Baseline, Method::Kf, Method::Tot];

    pub fn tag(self) -> &'static str {
        match self {
            Method::Baseline => "baseline",
            Method::Kf => "kf",
            Method::Tot => "tot",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.tag() == tag)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Horizontal and vertical beamformer factors.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainFactors {
    pub w_y: ComplexVector,
    pub w_z: ComplexVector,
    pub q_y: ComplexVector,
    pub q_z: ComplexVector,
    pub theta_y: ComplexVector,
    pub theta_z: ComplexVector,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BeamformingSolution {
    /// Combiner, length `K`.
    pub w: ComplexVector,
    /// Precoder, length `M`.
    pub q: ComplexVector,
    /// IRS reflection coefficients, length `N`.
    pub theta: ComplexVector,
    /// Present for the Kronecker-structured designers.
    pub factors: Option<DomainFactors>,
    pub method: Method,
}

impl BeamformingSolution {
    fn from_factors(factors: DomainFactors, method: Method) -> Self {
        Self {
            w: factors.w_y.kron(&factors.w_z),
            q: factors.q_y.kron(&factors.q_z),
            theta: factors.theta_y.kron(&factors.theta_z),
            factors: Some(factors),
            method,
        }
    }
}

/// `exp(-j ∠v_n)` per entry; zero entries map to `1`.
pub fn project_unit_modulus(v: &[C64]) -> ComplexVector {
    v.iter()
        .map(|z| {
            if z.re == 0.0 && z.im == 0.0 {
                C64::new(1.0, 0.0)
            } else {
                C64::from_polar(1.0, -z.arg())
            }
        })
        .collect()
}

/// Single-domain SVD design for the cascade `G diag(θ) H`.
///
/// With `H ≈ σ_h u_h v_h^H` and `G ≈ σ_g u_g v_g^H` the gain is
/// `σ_h σ_g (w^H u_g)(v_g^H diag(θ) u_h)(v_h^H q)`, maximized by `w = u_g`,
/// `q = v_h` and `θ = exp(-j ∠(v_g* ⊙ u_h))`.
fn svd_design(
    h: &ComplexMatrix,
    g: &ComplexMatrix,
) -> Result<(ComplexVector, ComplexVector, ComplexVector)> {
    if h.rows() != g.cols() {
        return Err(Error::DimensionMismatch {
            op: "svd_design",
            left: h.shape(),
            right: g.shape(),
        });
    }
    let sh = rank_one_svd(h)?;
    let sg = rank_one_svd(g)?;
    let theta = project_unit_modulus(&hadamard(&sg.v.conj(), &sh.u)?);
    Ok((sg.u, sh.v, theta))
}

/// Full-channel SVD baseline: `H` is `N x M`, `G` is `K x N`.
pub fn baseline_full(h: &ComplexMatrix, g: &ComplexMatrix) -> Result<BeamformingSolution> {
    let (w, q, theta) = svd_design(h, g)?;
    Ok(BeamformingSolution {
        w,
        q,
        theta,
        factors: None,
        method: Method::Baseline,
    })
}

/// Kronecker-factorization designer: the baseline applied independently to
/// `(H_y, G_y)` and `(H_z, G_z)`.
pub fn kf_design(
    h_y: &ComplexMatrix,
    h_z: &ComplexMatrix,
    g_y: &ComplexMatrix,
    g_z: &ComplexMatrix,
) -> Result<BeamformingSolution> {
    let (w_y, q_y, theta_y) = svd_design(h_y, g_y)?;
    let (w_z, q_z, theta_z) = svd_design(h_z, g_z)?;
    Ok(BeamformingSolution::from_factors(
        DomainFactors {
            w_y,
            w_z,
            q_y,
            q_z,
            theta_y,
            theta_z,
        },
        Method::Kf,
    ))
}

/// Single-domain tensor design on `T[k, m, n] = g_{k,n} h_{n,m}`.
///
/// The per-domain gain is `Σ w_k* q_m θ_n T[k, m, n]`; for
/// `T ≈ a ∘ b ∘ c` it is maximized by `w = a`, `q = b*`, `θ = exp(-j ∠c)`.
fn tensor_design(t: &Tensor3) -> Result<(ComplexVector, ComplexVector, ComplexVector)> {
    let (u1, u2, u3) = hosvd_rank_one(t)?;
    Ok((u1, u2.conj(), project_unit_modulus(&u3)))
}

/// Third-order tensor designer on the per-domain combined channel tensors
/// (see [`crate::tensor::fold_to_tensor`]), of shapes `K_t x M_t x N_t`.
pub fn tot_design(f_y: &Tensor3, f_z: &Tensor3) -> Result<BeamformingSolution> {
    let (w_y, q_y, theta_y) = tensor_design(f_y)?;
    let (w_z, q_z, theta_z) = tensor_design(f_z)?;
    Ok(BeamformingSolution::from_factors(
        DomainFactors {
            w_y,
            w_z,
            q_y,
            q_z,
            theta_y,
            theta_z,
        },
        Method::Tot,
    ))
}
