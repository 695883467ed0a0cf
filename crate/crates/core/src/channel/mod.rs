//! Geometric URA channels and their Kronecker factors.
//!
//! A link is described by three uniform rectangular arrays with half-wavelength
//! spacing: the BS (`M = M_y M_z` antennas), the IRS (`N = N_y N_z` elements)
//! and the UE (`K = K_y K_z` antennas). `H` (`N x M`) links BS to IRS and `G`
//! (`K x N`) links IRS to UE; each is a sum over paths of
//! `alpha * b a^T = (alpha * b_y a_y^T) ⊗ (b_z a_z^T)`.

mod estimation;

use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::tensor::{kron, ComplexMatrix, ComplexVector};
use crate::{Error, Result, C64};

pub use estimation::{
    add_estimation_noise, combined_channel, complex_gaussian_matrix, domain_row_permutation,
    extract_domain_combined, lskrf, nearest_kron_factor,
};

/// Element counts of a URA along the horizontal (`y`) and vertical (`z`) axes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArrayGeometry {
    pub n_y: usize,
    pub n_z: usize,
}

impl ArrayGeometry {
    pub fn new(n_y: usize, n_z: usize) -> Result<Self> {
        if n_y == 0 || n_z == 0 {
            return Err(Error::InvalidParameter("array dimensions must be positive"));
        }
        Ok(Self { n_y, n_z })
    }

    pub fn total(&self) -> usize {
        self.n_y * self.n_z
    }
}

/// The three arrays of an IRS-assisted link.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinkGeometry {
    /// Transmitter, `M_y x M_z`.
    pub bs: ArrayGeometry,
    /// Reflecting surface, `N_y x N_z`.
    pub irs: ArrayGeometry,
    /// Receiver, `K_y x K_z`.
    pub ue: ArrayGeometry,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpatialFrequencies {
    /// Azimuthal (horizontal) frequency, `pi sin(elev) sin(az)`.
    pub mu: f64,
    /// Elevation (vertical) frequency, `pi cos(elev)`.
    pub psi: f64,
}

pub fn spatial_frequencies(elev: f64, az: f64) -> SpatialFrequencies {
    SpatialFrequencies {
        mu: PI * libm::sin(elev) * libm::sin(az),
        psi: PI * libm::cos(elev),
    }
}

/// Array response and its horizontal/vertical factors, `full = y ⊗ z`.
#[derive(Clone, Debug, PartialEq)]
pub struct SteeringVector {
    pub full: ComplexVector,
    pub y: ComplexVector,
    pub z: ComplexVector,
}

fn phase_ramp(n: usize, freq: f64) -> ComplexVector {
    (0..n)
        .map(|p| C64::from_polar(1.0, -(p as f64) * freq))
        .collect()
}

/// `y[p] = exp(-j p mu)`, `z[p] = exp(-j p psi)`; element `m_z + m_y n_z` of
/// `full` is `exp(-j (m_y mu + m_z psi))`.
pub fn steering_vector(sf: SpatialFrequencies, geom: ArrayGeometry) -> SteeringVector {
    let y = phase_ramp(geom.n_y, sf.mu);
    let z = phase_ramp(geom.n_z, sf.psi);
    SteeringVector {
        full: y.kron(&z),
        y,
        z,
    }
}

/// One propagation path. Angles are in radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathParams {
    pub gain: C64,
    pub elev_dep: f64,
    pub az_dep: f64,
    pub elev_arr: f64,
    pub az_arr: f64,
}

/// Circularly-symmetric complex Gaussian `CN(mean, variance)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GainLaw {
    pub mean: C64,
    pub variance: f64,
}

impl Default for GainLaw {
    fn default() -> Self {
        Self {
            mean: C64::new(0.0, 0.0),
            variance: 1.0,
        }
    }
}

impl GainLaw {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> C64 {
        let s = libm::sqrt(self.variance / 2.0);
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        self.mean + C64::new(s * re, s * im)
    }
}

/// Angle and gain distribution of the paths of one link.
///
/// Elevations are uniform on `[90° - δ, 90° + δ]`, azimuths uniform on
/// `[az_lo, az_hi]`; departure and arrival angles are drawn independently.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathDistribution {
    pub elev_spread_deg: f64,
    pub az_lo_deg: f64,
    pub az_hi_deg: f64,
    pub gain: GainLaw,
}

impl Default for PathDistribution {
    fn default() -> Self {
        Self {
            elev_spread_deg: 0.0,
            az_lo_deg: -60.0,
            az_hi_deg: 60.0,
            gain: GainLaw::default(),
        }
    }
}

impl PathDistribution {
    pub fn with_spread(elev_spread_deg: f64) -> Self {
        Self {
            elev_spread_deg,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        let finite = [
            self.elev_spread_deg,
            self.az_lo_deg,
            self.az_hi_deg,
            self.gain.variance,
        ]
        .iter()
        .all(|x| x.is_finite());
        if !finite || self.elev_spread_deg < 0.0 || self.elev_spread_deg > 90.0 {
            return Err(Error::InvalidParameter(
                "elevation spread must lie in [0, 90] degrees",
            ));
        }
        if self.az_lo_deg > self.az_hi_deg {
            return Err(Error::InvalidParameter("azimuth range is empty"));
        }
        if self.gain.variance < 0.0 {
            return Err(Error::InvalidParameter("gain variance must be nonnegative"));
        }
        Ok(())
    }
}

fn uniform_deg<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    let u: f64 = rng.random();
    (lo + (hi - lo) * u).to_radians()
}

/// Draws `l` independent paths. Per path the draw order is departure
/// elevation, departure azimuth, arrival elevation, arrival azimuth, gain.
pub fn draw_paths<R: Rng + ?Sized>(
    l: usize,
    dist: &PathDistribution,
    rng: &mut R,
) -> Result<Vec<PathParams>> {
    if l == 0 {
        return Err(Error::InvalidParameter("path count must be at least 1"));
    }
    dist.validate()?;
    let (elev_lo, elev_hi) = (90.0 - dist.elev_spread_deg, 90.0 + dist.elev_spread_deg);
    Ok((0..l)
        .map(|_| {
            let elev_dep = uniform_deg(rng, elev_lo, elev_hi);
            let az_dep = uniform_deg(rng, dist.az_lo_deg, dist.az_hi_deg);
            let elev_arr = uniform_deg(rng, elev_lo, elev_hi);
            let az_arr = uniform_deg(rng, dist.az_lo_deg, dist.az_hi_deg);
            let gain = dist.gain.sample(rng);
            PathParams {
                gain,
                elev_dep,
                az_dep,
                elev_arr,
                az_arr,
            }
        })
        .collect())
}

/// A synthesized channel together with its Kronecker factors.
#[derive(Clone, Debug, PartialEq)]
pub struct GeometricChannel {
    /// `Σ_l kron(per_path_y[l], per_path_z[l])`.
    pub full: ComplexMatrix,
    /// `alpha_l b_y a_y^T` per path; the gain lives in the horizontal factor.
    pub per_path_y: Vec<ComplexMatrix>,
    /// `b_z a_z^T` per path.
    pub per_path_z: Vec<ComplexMatrix>,
    /// `Σ_l per_path_y[l]`.
    pub approx_y: ComplexMatrix,
    /// Mean of `per_path_z` over the paths.
    pub approx_z: ComplexMatrix,
}

impl GeometricChannel {
    /// `kron(approx_y, approx_z)`, the separable approximation of `full`.
    pub fn separable(&self) -> ComplexMatrix {
        kron(&self.approx_y, &self.approx_z)
    }
}

/// Builds the `rx x tx` channel of `paths` between a transmitting array
/// (departure angles) and a receiving array (arrival angles).
pub fn synth_channel(
    paths: &[PathParams],
    tx_geom: ArrayGeometry,
    rx_geom: ArrayGeometry,
) -> Result<GeometricChannel> {
    let (first, rest) = paths
        .split_first()
        .ok_or(Error::InvalidParameter("at least one path is required"))?;
    let factors = |p: &PathParams| {
        let a = steering_vector(spatial_frequencies(p.elev_dep, p.az_dep), tx_geom);
        let b = steering_vector(spatial_frequencies(p.elev_arr, p.az_arr), rx_geom);
        let by = b.y.scale(p.gain);
        (
            ComplexMatrix::outer(&by, &a.y),
            ComplexMatrix::outer(&b.z, &a.z),
        )
    };

    let (y0, z0) = factors(first);
    let mut full = kron(&y0, &z0);
    let mut approx_y = y0.clone();
    let mut z_sum = z0.clone();
    let mut per_path_y = alloc::vec![y0];
    let mut per_path_z = alloc::vec![z0];
    for p in rest {
        let (y, z) = factors(p);
        full = full.add(&kron(&y, &z))?;
        approx_y = approx_y.add(&y)?;
        z_sum = z_sum.add(&z)?;
        per_path_y.push(y);
        per_path_z.push(z);
    }
    let approx_z = z_sum.scale(C64::new(1.0 / paths.len() as f64, 0.0));
    Ok(GeometricChannel {
        full,
        per_path_y,
        per_path_z,
        approx_y,
        approx_z,
    })
}

/// Channels of one link realization.
#[derive(Clone, Debug, PartialEq)]
pub struct LinkChannels {
    /// BS → IRS, `N x M`.
    pub h: GeometricChannel,
    /// IRS → UE, `K x N`.
    pub g: GeometricChannel,
}

/// Draws `H` then `G` from the same distribution, with independent paths.
pub fn draw_link<R: Rng + ?Sized>(
    geom: &LinkGeometry,
    paths: usize,
    dist: &PathDistribution,
    rng: &mut R,
) -> Result<LinkChannels> {
    let h_paths = draw_paths(paths, dist, rng)?;
    let g_paths = draw_paths(paths, dist, rng)?;
    Ok(LinkChannels {
        h: synth_channel(&h_paths, geom.bs, geom.irs)?,
        g: synth_channel(&g_paths, geom.irs, geom.ue)?,
    })
}
