//! Dense complex matrix and third-order tensor kernels.

mod matrix;
mod svd;
mod tensor3;

pub use matrix::{dot, hadamard, khatri_rao, kron, norm, ComplexMatrix, ComplexVector};
pub use svd::{rank_one_svd, RankOneSvd, MAX_ITERATIONS, SIGMA_TOLERANCE, VECTOR_TOLERANCE};
pub use tensor3::{
    fold, fold_to_tensor, hosvd_rank_one, multilinear_form, n_mode_product, unfold, Mode, Tensor3,
};
