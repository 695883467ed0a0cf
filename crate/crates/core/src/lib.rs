//! Low-complexity joint active/passive beamforming for IRS-assisted MIMO links.
//!
//! Both the BS-IRS channel `H` and the IRS-UE channel `G` of a link built from
//! uniform rectangular arrays factor (exactly for a single path, approximately
//! otherwise) into a Kronecker product of a horizontal (`y`) and a vertical
//! (`z`) part. This crate exploits that structure:
//!
//! - [`tensor`] holds the dense complex kernels: Kronecker/Khatri-Rao
//!   products, the rank-one truncated SVD, third-order tensor unfoldings and
//!   the rank-one HOSVD.
//! - [`channel`] synthesizes geometric URA channels, the combined Khatri-Rao
//!   channel and the factorized estimates used under imperfect CSI.
//! - [`beamformers`] implements the full-channel SVD baseline, the per-domain
//!   SVD designer ([`beamformers::kf_design`]) and the third-order tensor
//!   designer ([`beamformers::tot_design`]).
//! - [`metrics`] evaluates received gain, spectral efficiency and the
//!   operation-count complexity model.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod beamformers;
pub mod channel;
pub mod error;
pub mod metrics;
pub mod tensor;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use tensor::{ComplexMatrix, ComplexVector, Tensor3};
