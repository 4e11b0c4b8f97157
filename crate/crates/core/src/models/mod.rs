//! State factories and the parameter sweeps built on them.

mod kitaev;
mod random;
mod sweep;

pub use kitaev::{
    dispersion, ground_state_energy, kitaev2d_ground_state, DispersionPoint, Kitaev2DParams,
};
pub use random::{random_gaussian, random_gaussian_fixed_n, random_orbitals};
pub use sweep::{
    sweep_fixed_n, sweep_kitaev, sweep_random, FixedNRecord, SweepConfig, SweepRecord,
};
