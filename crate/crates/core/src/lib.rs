//! Fermionic Gaussian states, perfect Majorana sampling, and stabilizer Rényi entropies.
//!
//! A Gaussian state on `L` modes is fully described by its `2L x 2L` real
//! skew-symmetric covariance matrix Γ. The squared expectation values of the
//! `4^L` Majorana monomials define a probability distribution over binary strings
//! `x ∈ {0,1}^{2L}`,
//!
//! ```text
//! π(x) = det[Γ|_x] / det[1 + Γ],
//! ```
//!
//! which is a determinantal point process with a skew-symmetric kernel. The
//! [`sampler`] draws exact samples from it by a chain of conditional
//! probabilities, each a ratio of two principal-minor determinants, and the
//! [`magic`] module turns the samples into estimates of the (filtered)
//! stabilizer Rényi entropies.
//!
//! The remaining modules provide the supporting pieces:
//!
//! - [`linalg`]: log-domain determinants, Pfaffians, Haar sampling, skew spectra.
//! - [`gaussian`]: the covariance-matrix type and its observables.
//! - [`analytics`]: closed-form ensemble averages of participation ratios.
//! - [`models`]: random ensembles, a 2D p+ip superconductor, parameter sweeps.
//! - [`oracle`]: a dense `2^L` state-vector path used to cross-check everything.
//! - [`validate`]: the self-check suite behind the CLI `validate` command.
//!
//! # Quick start
//!
//! ```
//! use fermion_magic::{gaussian::CovarianceMatrix, magic, sampler::{self, SamplerConfig}};
//!
//! let gamma = CovarianceMatrix::vacuum(4);
//! let samples = sampler::sample_batch(&gamma, &SamplerConfig::new(7, 200)).unwrap();
//! let est = magic::sre_estimate(&samples, 2.0, gamma.modes()).unwrap();
//! assert_eq!(est.m_alpha_filtered, 0.0);
//! ```

pub mod analytics;
pub mod error;
pub mod gaussian;
pub mod linalg;
pub mod magic;
pub mod models;
pub mod oracle;
pub mod rng;
pub mod sampler;
pub mod stats;
pub mod validate;

pub use error::{Error, Result};
