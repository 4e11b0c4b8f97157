//! Self-checks behind the CLI `validate` command.
//!
//! Each check compares two independent computations on small random states
//! drawn from the given seed.

use std::f64::consts::LN_2;

use serde::Serialize;

use crate::analytics::{avg_ipr_exact, EnsembleSpec};
use crate::error::{Error, Result};
use crate::gaussian::{CovarianceMatrix, MajoranaString};
use crate::linalg::haar_special_orthogonal;
use crate::magic::{characteristic_distribution, sre_estimate, sre_exact};
use crate::models::{kitaev2d_ground_state, random_orbitals, Kitaev2DParams};
use crate::oracle::{
    covariance_from_state, exact_characteristic_distribution, pauli_index, pauli_of_majorana,
    sre_from_distribution, statevector_from_orbitals, statevector_from_rotation,
    MAX_DISTRIBUTION_MODES,
};
use crate::rng::{derive_seed, sample_stream, seeded};
use crate::sampler::{draw_samples, marginal_probability, sample_one, Method};

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Worst deviation observed, or a short note.
    pub detail: String,
}

impl CheckResult {
    fn tolerance(name: impl Into<String>, worst: f64, tol: f64) -> Self {
        CheckResult {
            name: name.into(),
            passed: worst.is_finite() && worst <= tol,
            detail: format!("max deviation {worst:.3e} (tolerance {tol:.0e})"),
        }
    }
}

const STATES_PER_SIZE: u64 = 3;

/// Runs every check for `2 ≤ L ≤ max_modes`.
pub fn run_checks(max_modes: usize, seed: u64) -> Result<Vec<CheckResult>> {
    if !(2..=MAX_DISTRIBUTION_MODES).contains(&max_modes) {
        return Err(Error::InvalidArgument(format!(
            "max-modes must lie in 2..={MAX_DISTRIBUTION_MODES}, got {max_modes}"
        )));
    }
    let mut out = Vec::new();
    for l in 2..=max_modes {
        out.push(oracle_distribution(l, seed)?);
        out.push(oracle_covariance(l, seed)?);
    }
    out.push(orbital_states(max_modes.min(6), seed)?);
    out.push(parity_of_pure_states(max_modes, seed));
    out.push(sampler_chain_rule(max_modes.min(4), seed)?);
    out.push(stabilizer_zeros(max_modes)?);
    out.push(ipr_closed_form());
    out.push(kitaev_trivial_phases()?);
    Ok(out)
}

fn random_rotation(l: usize, seed: u64, tag: u64, i: u64) -> nalgebra::DMatrix<f64> {
    haar_special_orthogonal(2 * l, &mut seeded(derive_seed(seed, &[tag, l as u64, i])))
}

fn oracle_distribution(l: usize, seed: u64) -> Result<CheckResult> {
    let mut worst = 0.0f64;
    for i in 0..STATES_PER_SIZE {
        let o = random_rotation(l, seed, 1, i);
        let gamma = CovarianceMatrix::vacuum(l).rotate(&o)?;
        let psi = statevector_from_rotation(&o, l)?;
        let pf = characteristic_distribution(&gamma)?;
        let dense = exact_characteristic_distribution(&psi)?;
        for (idx, p) in pf.iter().enumerate() {
            let x = MajoranaString::from_index(idx as u64, 2 * l);
            worst = worst.max((p - dense[pauli_index(pauli_of_majorana(&x), l)]).abs());
        }
        for alpha in [1.0, 2.0, 3.0] {
            let exact = sre_exact(&gamma, alpha)?;
            let (m, mf) = sre_from_distribution(&dense, l, alpha);
            worst = worst
                .max((exact.m_alpha - m).abs())
                .max((exact.m_alpha_filtered - mf).abs());
        }
    }
    Ok(CheckResult::tolerance(
        format!("characteristic distribution and SREs vs dense oracle, L={l}"),
        worst,
        1e-10,
    ))
}

fn oracle_covariance(l: usize, seed: u64) -> Result<CheckResult> {
    let mut worst = 0.0f64;
    for i in 0..STATES_PER_SIZE {
        let o = random_rotation(l, seed, 2, i);
        let gamma = CovarianceMatrix::vacuum(l).rotate(&o)?;
        let psi = statevector_from_rotation(&o, l)?;
        worst = worst.max((covariance_from_state(&psi) - gamma.gamma()).amax());
    }
    Ok(CheckResult::tolerance(
        format!("rotated covariance vs dense two-point functions, L={l}"),
        worst,
        1e-8,
    ))
}

fn orbital_states(l: usize, seed: u64) -> Result<CheckResult> {
    let mut worst = 0.0f64;
    for n in 0..=l {
        let v = random_orbitals(
            l,
            n,
            &mut seeded(derive_seed(seed, &[3, l as u64, n as u64])),
        )?;
        let psi = statevector_from_orbitals(&v)?;
        let gamma = CovarianceMatrix::from_orbitals(&v);
        worst = worst.max((covariance_from_state(&psi) - gamma.gamma()).amax());
        worst = worst.max((gamma.particle_number() - n as f64).abs());
    }
    Ok(CheckResult::tolerance(
        format!("Slater covariance vs dense state, L={l}"),
        worst,
        1e-10,
    ))
}

fn parity_of_pure_states(l: usize, seed: u64) -> CheckResult {
    let worst = (0..STATES_PER_SIZE)
        .map(|i| {
            let gamma = CovarianceMatrix::vacuum(l)
                .rotate(&random_rotation(l, seed, 4, i))
                .expect("orthogonal");
            (gamma.parity_expectation().powi(2) - 1.0).abs()
        })
        .fold(0.0, f64::max);
    CheckResult::tolerance(format!("parity squared of pure states, L={l}"), worst, 1e-8)
}

fn sampler_chain_rule(l: usize, seed: u64) -> Result<CheckResult> {
    let gamma = CovarianceMatrix::vacuum(l).rotate(&random_rotation(l, seed, 5, 0))?;
    let mut worst = 0.0f64;
    for i in 0..20 {
        let s = sample_one(&gamma, &mut sample_stream(seed, i))?;
        let bits = s.x.bits();
        let full = marginal_probability(&gamma, bits)?;
        worst = worst.max((s.log_prob.exp() - full).abs() / full);
        worst = worst.max((s.log_prob - gamma.log_characteristic(&s.x)).abs());
        for mu in 0..bits.len() {
            let prefix = &bits[..mu];
            let parent = marginal_probability(&gamma, prefix)?;
            let mut ext = prefix.to_vec();
            ext.push(false);
            let p0 = marginal_probability(&gamma, &ext)?;
            ext[mu] = true;
            let p1 = marginal_probability(&gamma, &ext)?;
            worst = worst.max((p0 + p1 - parent).abs());
        }
    }
    Ok(CheckResult::tolerance(
        format!("sampler chain rule and marginal consistency, L={l}"),
        worst,
        1e-8,
    ))
}

fn stabilizer_zeros(l: usize) -> Result<CheckResult> {
    let mut worst = 0.0f64;
    for gamma in [
        CovarianceMatrix::vacuum(l),
        CovarianceMatrix::fully_occupied(l),
    ] {
        let samples = draw_samples(&gamma, 0, 200, Method::Determinant)?;
        for alpha in [1.0, 2.0, 3.0] {
            let e = sre_estimate(&samples, alpha, l)?;
            worst = worst.max(e.m_alpha_filtered.abs()).max(e.stderr);
        }
        for s in &samples {
            worst = worst.max((s.log_prob + l as f64 * LN_2).abs());
        }
    }
    Ok(CheckResult::tolerance(
        format!("stabilizer states give exactly zero, L={l}"),
        worst,
        0.0,
    ))
}

fn ipr_closed_form() -> CheckResult {
    let v = avg_ipr_exact(&EnsembleSpec::new(4, 2, 2).expect("valid spec"));
    CheckResult::tolerance(
        "average IPR at L=4, N=2, alpha=2 equals 0.3",
        (v - 0.3).abs(),
        1e-14,
    )
}

fn kitaev_trivial_phases() -> Result<CheckResult> {
    let empty = kitaev2d_ground_state(&Kitaev2DParams::new(4, 1.0, -1.0, 0.0)?)?;
    let full = kitaev2d_ground_state(&Kitaev2DParams::new(4, 1.0, 9.0, 0.0)?)?;
    let worst = (empty.gamma() - CovarianceMatrix::vacuum(16).gamma())
        .amax()
        .max((full.gamma() - CovarianceMatrix::fully_occupied(16).gamma()).amax());
    Ok(CheckResult::tolerance(
        "lattice superconductor: empty and full bands are Fock states",
        worst,
        0.0,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass() {
        let res = run_checks(4, 7).unwrap();
        for r in &res {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }

    #[test]
    fn range_enforced() {
        assert!(run_checks(1, 0).is_err());
        assert!(run_checks(8, 0).is_err());
    }
}
