//! Received gain, spectral efficiency and the operation-count complexity
//! model.

use crate::beamformers::{BeamformingSolution, Method};
use crate::channel::LinkGeometry;
use crate::tensor::{ComplexMatrix, ComplexVector};
use crate::{Error, Result, C64};

/// Transmit power `P_t` and receiver noise power `σ_n²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinkBudget {
    pub tx_power: f64,
    pub noise_power: f64,
}

impl LinkBudget {
    pub fn new(tx_power: f64, noise_power: f64) -> Result<Self> {
        if !(tx_power > 0.0 && noise_power > 0.0)
            || !tx_power.is_finite()
            || !noise_power.is_finite()
        {
            return Err(Error::InvalidParameter(
                "link budget powers must be positive and finite",
            ));
        }
        Ok(Self {
            tx_power,
            noise_power,
        })
    }

    /// `P_t = 1`, `σ_n² = 10^(-snr_db / 10)`.
    pub fn from_snr_db(snr_db: f64) -> Result<Self> {
        Self::new(1.0, libm::pow(10.0, -snr_db / 10.0))
    }

    pub fn snr(&self) -> f64 {
        self.tx_power / self.noise_power
    }
}

/// `w^H G diag(θ) H q`.
pub fn cascade_gain(
    w: &[C64],
    q: &[C64],
    theta: &[C64],
    h: &ComplexMatrix,
    g: &ComplexMatrix,
) -> Result<C64> {
    if h.cols() != q.len()
        || h.rows() != theta.len()
        || g.cols() != theta.len()
        || g.rows() != w.len()
    {
        return Err(Error::DimensionMismatch {
            op: "cascade_gain",
            left: h.shape(),
            right: g.shape(),
        });
    }
    let mut reflected: ComplexVector = h.mul_vec(q)?;
    for (r, t) in reflected.iter_mut().zip(theta) {
        *r *= t;
    }
    let received = g.mul_vec(&reflected)?;
    Ok(crate::tensor::dot(w, &received))
}

/// Gain of `sol` over the cascade `G diag(θ) H`.
pub fn effective_gain(
    sol: &BeamformingSolution,
    h: &ComplexMatrix,
    g: &ComplexMatrix,
) -> Result<C64> {
    cascade_gain(&sol.w, &sol.q, &sol.theta, h, g)
}

/// `log2(1 + |gain|² P_t / σ_n²)` in bit/s/Hz.
pub fn spectral_efficiency(gain: C64, budget: &LinkBudget) -> f64 {
    libm::log2(1.0 + gain.norm_sqr() * budget.snr())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FactorizedSe {
    pub se: f64,
    /// `|s_y|² sqrt(P_t / σ_n²)`
    pub snr_y: f64,
    /// `|s_z|² sqrt(P_t / σ_n²)`
    pub snr_z: f64,
}

/// Spectral efficiency of the factorized received signal `s_y s_z`, with the
/// SNR split evenly between the two domains so that
/// `snr_y * snr_z = |s_y s_z|² P_t / σ_n²`.
pub fn factorized_se(s_y: C64, s_z: C64, budget: &LinkBudget) -> FactorizedSe {
    let root = libm::sqrt(budget.snr());
    FactorizedSe {
        se: spectral_efficiency(s_y * s_z, budget),
        snr_y: s_y.norm_sqr() * root,
        snr_z: s_z.norm_sqr() * root,
    }
}

/// Array dimensions for the complexity model. Real-valued so that e.g.
/// `N_y = N_z = √1000` can be evaluated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexityDims {
    pub m_y: f64,
    pub m_z: f64,
    pub k_y: f64,
    pub k_z: f64,
    pub n_y: f64,
    pub n_z: f64,
}

impl From<&LinkGeometry> for ComplexityDims {
    fn from(g: &LinkGeometry) -> Self {
        Self {
            m_y: g.bs.n_y as f64,
            m_z: g.bs.n_z as f64,
            k_y: g.ue.n_y as f64,
            k_z: g.ue.n_z as f64,
            n_y: g.irs.n_y as f64,
            n_z: g.irs.n_z as f64,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexityReport {
    pub method: Method,
    /// Model operations, big-O constants set to one.
    pub op_count: f64,
    pub dims: ComplexityDims,
}

/// Operation count of each designer:
///
/// | method   | model operations                   |
/// |----------|------------------------------------|
/// | baseline | `N (M + K)`                        |
/// | kf       | `N_y (M_y + K_y) + N_z (M_z + K_z)` |
/// | tot      | `3 (K_y M_y N_y + K_z M_z N_z)`    |
pub fn complexity_count(method: Method, dims: ComplexityDims) -> Result<ComplexityReport> {
    let ComplexityDims {
        m_y,
        m_z,
        k_y,
        k_z,
        n_y,
        n_z,
    } = dims;
    if [m_y, m_z, k_y, k_z, n_y, n_z]
        .iter()
        .any(|d| !(d.is_finite() && *d > 0.0))
    {
        return Err(Error::InvalidParameter(
            "complexity dimensions must be positive",
        ));
    }
    let op_count = match method {
        Method::Baseline => n_y * n_z * (m_y * m_z + k_y * k_z),
        Method::Kf => n_y * (m_y + k_y) + n_z * (m_z + k_z),
        Method::Tot => 3.0 * (k_y * m_y * n_y + k_z * m_z * n_z),
    };
    Ok(ComplexityReport {
        method,
        op_count,
        dims,
    })
}
