//! Rank-one truncated SVD by power iteration.

use crate::tensor::matrix::{ComplexMatrix, ComplexVector};
use crate::{Error, Result, C64};

/// Relative change of the singular value estimate at which iteration stops.
pub const SIGMA_TOLERANCE: f64 = 1e-12;
/// Norm of the change of the right vector between iterations at which
/// iteration stops. The singular value converges quadratically in the vector
/// error, so checking it alone leaves the vectors accurate only to about
/// `sqrt(SIGMA_TOLERANCE)`.
pub const VECTOR_TOLERANCE: f64 = 1e-13;
pub const MAX_ITERATIONS: usize = 10_000;

/// Entries below this magnitude (of a unit vector) are skipped when picking
/// the reference entry for phase normalization.
const PHASE_REFERENCE_FLOOR: f64 = 1e-10;

/// Dominant singular triplet `sigma * u * v^H`.
#[derive(Clone, Debug, PartialEq)]
pub struct RankOneSvd {
    pub sigma: f64,
    /// Left singular vector, first significant entry real and nonnegative.
    pub u: ComplexVector,
    pub v: ComplexVector,
}

impl RankOneSvd {
    /// `sigma * u * v^H` as a dense matrix.
    pub fn to_matrix(&self) -> ComplexMatrix {
        let s = C64::new(self.sigma, 0.0);
        ComplexMatrix::from_fn(self.u.len(), self.v.len(), |r, c| {
            s * self.u[r] * self.v[c].conj()
        })
    }
}

/// Best rank-one approximation of `a` in Frobenius norm.
///
/// Power iteration on `A^H A`, started from the normalized `1 + e_1` vector,
/// until both the singular value and the right vector settle.
/// If that start happens to lie in the null space of `A`, the canonical basis
/// vector of the largest column is used instead. Each iteration costs two
/// matrix-vector products, i.e. `O(rows * cols)`.
///
/// When the top two singular values coincide the result is whichever
/// direction the fixed start converges to.
pub fn rank_one_svd(a: &ComplexMatrix) -> Result<RankOneSvd> {
    if a.is_zero() {
        return Err(Error::ZeroInput("rank_one_svd"));
    }
    let n = a.cols();
    let mut start = ComplexVector::ones(n);
    start[0] += C64::new(1.0, 0.0);
    let mut v = start.normalized().expect("nonzero start");
    let mut av = a.mul_vec(&v)?;
    if av.norm() <= f64::EPSILON * a.frobenius_norm() {
        let j = (0..n)
            .max_by(|&x, &y| {
                let nx = crate::tensor::matrix::norm(a.col(x));
                let ny = crate::tensor::matrix::norm(a.col(y));
                nx.total_cmp(&ny)
            })
            .expect("at least one column");
        v = ComplexVector::basis(n, j);
        av = a.mul_vec(&v)?;
    }

    let mut sigma = av.norm();
    for _ in 0..MAX_ITERATIONS {
        let next = match a.adjoint_mul_vec(&av)?.normalized() {
            Some(v) => v,
            None => break,
        };
        let step: f64 = next
            .iter()
            .zip(v.iter())
            .map(|(x, y)| (x - y).norm_sqr())
            .sum();
        v = next;
        av = a.mul_vec(&v)?;
        let updated = av.norm();
        let converged = (updated - sigma).abs() <= SIGMA_TOLERANCE * updated
            && libm::sqrt(step) <= VECTOR_TOLERANCE;
        sigma = updated;
        if converged {
            break;
        }
    }

    let mut u = av.scale(C64::new(1.0 / sigma, 0.0));
    // A v = sigma u; renormalize against rounding.
    u = u.normalized().expect("nonzero left vector");
    let phase = reference_phase(&u);
    Ok(RankOneSvd {
        sigma,
        u: u.scale(phase),
        v: v.scale(phase),
    })
}

/// Unit-modulus factor that makes the first significant entry of `u` real
/// and nonnegative.
fn reference_phase(u: &[C64]) -> C64 {
    u.iter()
        .find(|z| z.norm() > PHASE_REFERENCE_FLOOR)
        .map(|z| z.conj() / z.norm())
        .unwrap_or(C64::new(1.0, 0.0))
}
