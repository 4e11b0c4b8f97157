//! Closed-form ensemble averages for number-conserving random Gaussian states.
//!
//! For Slater states with Haar-random orbitals (`L` modes, `N` particles) the
//! ensemble-averaged IPR is
//!
//! ```text
//! E[I_α] = C(L, N) Π_{j=0}^{α-1} (j+N)! (j+L-N)! / (j! (j+L)!)
//! ```
//!
//! The `j = 0` factor is exactly `1 / C(L, N)`, so the product is evaluated as
//! `Σ_{j=1}^{α-1} [ln (j+N)! - ln j! + ln (j+L-N)! - ln (j+L)!]`.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_factorial;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::stats::binary_entropy;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnsembleSpec {
    pub modes: u64,
    pub particles: u64,
    pub alpha: u32,
}

impl EnsembleSpec {
    pub fn new(modes: u64, particles: u64, alpha: u32) -> Result<Self> {
        if modes == 0 || particles > modes {
            return Err(Error::InvalidArgument(format!(
                "need 0 <= N <= L and L >= 1, got L = {modes}, N = {particles}"
            )));
        }
        if alpha == 0 {
            return Err(Error::InvalidArgument("alpha must be at least 1".into()));
        }
        Ok(EnsembleSpec {
            modes,
            particles,
            alpha,
        })
    }

    /// Filling `n = N / L`.
    pub fn filling(&self) -> f64 {
        self.particles as f64 / self.modes as f64
    }
}

/// `ln E[I_α]`.
pub fn log_avg_ipr_exact(spec: &EnsembleSpec) -> f64 {
    let (l, n) = (spec.modes, spec.particles);
    (1..spec.alpha as u64)
        .map(|j| {
            // grouped so that N <-> L - N and N ∈ {0, L} are exact
            (ln_factorial(j + n) + ln_factorial(j + l - n))
                - (ln_factorial(j) + ln_factorial(j + l))
        })
        .sum()
}

/// `E[I_α]` over Haar-random Slater states.
pub fn avg_ipr_exact(spec: &EnsembleSpec) -> f64 {
    log_avg_ipr_exact(spec).exp()
}

/// Annealed participation entropy `ln E[I_α] / (1 - α)`, for `α ≥ 2`.
pub fn avg_pre_annealed(spec: &EnsembleSpec) -> Result<f64> {
    if spec.alpha < 2 {
        return Err(Error::InvalidArgument(
            "the annealed entropy needs alpha >= 2".into(),
        ));
    }
    // `+ 0.0` turns the -0.0 of Fock-space ensembles into 0.0.
    Ok(log_avg_ipr_exact(spec) / (1.0 - spec.alpha as f64) + 0.0)
}

/// `ln G(k)` for the Barnes G-function at a positive integer, `G(k) = Π_{j=1}^{k-2} j!`.
pub fn ln_barnes_g(k: u32) -> f64 {
    assert!(k >= 1, "Barnes G is evaluated at positive integers only");
    (1..k.saturating_sub(1) as u64).map(ln_factorial).sum()
}

fn check_asymptotic_args(n: f64, alpha: u32) -> Result<()> {
    if !(n > 0.0 && n < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "filling must lie in (0, 1), got {n}"
        )));
    }
    if alpha < 2 {
        return Err(Error::InvalidArgument(
            "the asymptotic constant needs alpha >= 2".into(),
        ));
    }
    Ok(())
}

/// Constant term `c(n; α)` of the large-`L` expansion of the annealed entropy:
/// `-ln(2π)/2 - ((1+α)/2) ln(n(1-n)) + ln G(α+1)/(α-1)`.
pub fn pre_constant(n: f64, alpha: u32) -> Result<f64> {
    check_asymptotic_args(n, alpha)?;
    let a = alpha as f64;
    Ok(
        -0.5 * (2.0 * PI).ln() - 0.5 * (1.0 + a) * (n * (1.0 - n)).ln()
            + ln_barnes_g(alpha + 1) / (a - 1.0),
    )
}

/// `[-α ln 2π + 2 ln G(α+1) - α² ln(n(1-n))] / (2(α-1))`, kept for comparison
/// with [`pre_constant`]; it does not match the expansion of the exact product.
pub fn pre_constant_as_published(n: f64, alpha: u32) -> Result<f64> {
    check_asymptotic_args(n, alpha)?;
    let a = alpha as f64;
    Ok(
        (-a * (2.0 * PI).ln() + 2.0 * ln_barnes_g(alpha + 1) - a * a * (n * (1.0 - n)).ln())
            / (2.0 * (a - 1.0)),
    )
}

/// `L h(n) - ((1+α)/2) ln L + c(n; α)` with `h` the binary entropy.
pub fn avg_pre_asymptotic(spec: &EnsembleSpec) -> Result<f64> {
    let n = spec.filling();
    let c = pre_constant(n, spec.alpha)?;
    let l = spec.modes as f64;
    Ok(l * binary_entropy(n) - 0.5 * (1.0 + spec.alpha as f64) * l.ln() + c)
}

/// Leading extensive term `L ln 2` of the SRE of Haar-random (non-Gaussian) states.
pub fn haar_leading_reference(modes: usize) -> f64 {
    modes as f64 * LN_2
}

/// Experimental: `ln E[I_α]` for real `α > 0` via
/// `Π_{j=1}^{N} Γ(j+α) Γ(j+L-N+1) / (Γ(j+1) Γ(j+L-N+α))`.
pub fn log_avg_ipr_real_alpha(modes: u64, particles: u64, alpha: f64) -> Result<f64> {
    if modes == 0 || particles > modes || !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "invalid ensemble L = {modes}, N = {particles}, alpha = {alpha}"
        )));
    }
    let holes = (modes - particles) as f64;
    Ok((1..=particles)
        .map(|j| {
            let j = j as f64;
            (ln_gamma(j + alpha) - ln_gamma(j + 1.0))
                + (ln_gamma(j + holes + 1.0) - ln_gamma(j + holes + alpha))
        })
        .sum())
}

/// One row of the `ipr-table` output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IprRow {
    #[serde(rename = "L")]
    pub modes: u64,
    #[serde(rename = "N")]
    pub particles: u64,
    pub alpha: u32,
    pub ipr_exact: f64,
    pub pre_annealed: Option<f64>,
    /// Blank where the expansion is undefined (`α = 1`, `N ∈ {0, L}`).
    pub pre_asymptotic: Option<f64>,
}

pub fn ipr_row(spec: &EnsembleSpec) -> IprRow {
    IprRow {
        modes: spec.modes,
        particles: spec.particles,
        alpha: spec.alpha,
        ipr_exact: avg_ipr_exact(spec),
        pre_annealed: avg_pre_annealed(spec).ok(),
        pre_asymptotic: avg_pre_asymptotic(spec).ok(),
    }
}
