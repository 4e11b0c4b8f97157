use rand::Rng;

use crate::error::{Error, Result};
use crate::gaussian::{CovarianceMatrix, OrbitalMatrix};
use crate::linalg::{haar_orthogonal, haar_unitary};

/// `O Γ₀ Oᵀ` with `O` Haar-distributed on `O(2L)`.
pub fn random_gaussian<R: Rng + ?Sized>(modes: usize, rng: &mut R) -> CovarianceMatrix {
    let o = haar_orthogonal(2 * modes, rng);
    CovarianceMatrix::vacuum(modes)
        .rotate(&o)
        .expect("Haar sample is orthogonal")
}

/// First `N` columns of a Haar unitary on `L` modes.
pub fn random_orbitals<R: Rng + ?Sized>(
    modes: usize,
    particles: usize,
    rng: &mut R,
) -> Result<OrbitalMatrix> {
    if particles > modes {
        return Err(Error::InvalidArgument(format!(
            "{particles} particles do not fit in {modes} modes"
        )));
    }
    let u = haar_unitary(modes, rng);
    OrbitalMatrix::new(u.columns(0, particles).into_owned())
}

/// A Haar-random Slater state with `N` particles.
pub fn random_gaussian_fixed_n<R: Rng + ?Sized>(
    modes: usize,
    particles: usize,
    rng: &mut R,
) -> Result<CovarianceMatrix> {
    Ok(CovarianceMatrix::from_orbitals(&random_orbitals(
        modes, particles, rng,
    )?))
}
