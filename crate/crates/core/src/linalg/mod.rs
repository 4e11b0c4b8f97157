//! Dense numerical kernels shared by every other module.
//!
//! Determinants and Pfaffians are returned as `(sign, ln|value|)` pairs:
//! `det(1 + Γ)` already reaches `2^L`, so probabilities are always formed as
//! ratios in log (or scaled) form.

mod haar;
mod lu;
mod pfaffian;
mod scaled;
mod spectrum;

pub use haar::{
    haar_orthogonal, haar_special_orthogonal, haar_unitary, orthogonality_residual,
    unitarity_residual,
};
pub use lu::{det_in_place, log_abs_det_complex, log_det, SignedLogDet};
pub(crate) use pfaffian::check_skew;
pub use pfaffian::{max_asymmetry, pfaffian, pfaffian_in_place, SKEW_TOLERANCE};
pub use scaled::Scaled;
pub use spectrum::skew_spectrum;
