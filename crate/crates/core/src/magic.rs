//! Stabilizer Rényi entropies from Majorana samples, plus exact small-system
//! references for SREs and participation entropies.
//!
//! With `D = 2^L`, `π` the characteristic distribution and `π̃` its
//! restriction to strings other than the identity and parity, renormalized by
//! `D / (D - 2)`:
//!
//! ```text
//! M_α = log(Q_α)/(1-α) - log D,   Q_α = Σ_x π^α
//! M̃_α = log(Q̃_α)/(1-α) - log D,   Q̃_α = Σ_x π̃ π^{α-1}
//! Q_α = 2/D^α + (D-2)/D · Q̃_α
//! ```
//!
//! and the `α → 1` limits are Shannon entropies.

use std::f64::consts::LN_2;

use itertools::Itertools;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{CovarianceMatrix, MajoranaString, OrbitalMatrix};
use crate::linalg::log_abs_det_complex;
use crate::sampler::MajoranaSample;
use crate::stats::{log_sum_exp, mean_and_stderr, neumaier_sum};

/// Largest `L` for the `4^L` enumeration in [`sre_exact`].
pub const MAX_EXACT_SRE_MODES: usize = 10;
/// Largest `L` for the Fock-sector enumeration in [`pre_exact`].
pub const MAX_EXACT_PRE_MODES: usize = 24;
/// Allowed `|Σ π - 1|` in exact enumerations.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-8;

/// Which strings the filtered estimator drops.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Filter {
    /// Pure states: identity and parity, each with `π = 1/D`.
    IdentityAndParity,
    /// Mixed states: identity only, `π_I = 1/(D · purity)`.
    IdentityOnly { purity: f64 },
}

impl Filter {
    fn drops(&self, x: &MajoranaString) -> bool {
        match self {
            Filter::IdentityAndParity => x.is_identity() || x.is_parity(),
            Filter::IdentityOnly { .. } => x.is_identity(),
        }
    }

    /// `ln` of the probability of each dropped string, and how many there are.
    fn dropped_mass(&self, modes: usize) -> (f64, f64) {
        let log_d = modes as f64 * LN_2;
        match *self {
            Filter::IdentityAndParity => (-log_d, 2.0),
            Filter::IdentityOnly { purity } => (-log_d - purity.ln(), 1.0),
        }
    }

    /// The filter matching the state's purity flag.
    pub fn for_state(gamma: &CovarianceMatrix) -> Self {
        if gamma.is_pure() {
            Filter::IdentityAndParity
        } else {
            Filter::IdentityOnly {
                purity: gamma.purity(),
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ErrorMethod {
    /// First-order delta method.
    #[default]
    Delta,
    /// Leave-one-out jackknife.
    Jackknife,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorOptions {
    pub filter: Filter,
    pub errors: ErrorMethod,
}

impl Default for EstimatorOptions {
    fn default() -> Self {
        EstimatorOptions {
            filter: Filter::IdentityAndParity,
            errors: ErrorMethod::Delta,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SreEstimate {
    pub alpha: f64,
    pub m_alpha: f64,
    pub m_alpha_filtered: f64,
    /// Standard error of `m_alpha_filtered`.
    pub stderr: f64,
    /// Standard error of `m_alpha`.
    pub stderr_unfiltered: f64,
    pub n_used: usize,
    pub n_total: usize,
    pub filter: Filter,
}

/// Serialized form of an estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SreRecord {
    pub alpha: f64,
    pub m_alpha: f64,
    pub m_alpha_filtered: f64,
    pub stderr: f64,
    pub n_used: usize,
    pub n_total: usize,
    #[serde(rename = "L")]
    pub modes: usize,
    pub seed: u64,
}

impl SreEstimate {
    pub fn record(&self, modes: usize, seed: u64) -> SreRecord {
        SreRecord {
            alpha: self.alpha,
            m_alpha: self.m_alpha,
            m_alpha_filtered: self.m_alpha_filtered,
            stderr: self.stderr,
            n_used: self.n_used,
            n_total: self.n_total,
            modes,
            seed,
        }
    }
}

/// Estimates `M_α` and `M̃_α` from samples of a pure state.
pub fn sre_estimate(samples: &[MajoranaSample], alpha: f64, modes: usize) -> Result<SreEstimate> {
    sre_estimate_with(samples, alpha, modes, &EstimatorOptions::default())
}

pub fn sre_estimate_with(
    samples: &[MajoranaSample],
    alpha: f64,
    modes: usize,
    opts: &EstimatorOptions,
) -> Result<SreEstimate> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    if modes == 0 {
        return Err(Error::InvalidArgument("need at least one mode".into()));
    }
    if let Some(bad) = samples.iter().find(|s| s.x.len() != 2 * modes) {
        return Err(Error::DimensionMismatch {
            expected: 2 * modes,
            found: bad.x.len(),
        });
    }
    let log_pi: Vec<f64> = samples
        .iter()
        .filter(|s| !opts.filter.drops(&s.x))
        .map(|s| s.log_prob)
        .collect();
    if log_pi.is_empty() {
        return Err(Error::InsufficientSamples {
            total: samples.len(),
        });
    }
    if opts.errors == ErrorMethod::Jackknife && log_pi.len() < 2 {
        return Err(Error::InsufficientSamples {
            total: samples.len(),
        });
    }
    let log_d = modes as f64 * LN_2;
    let (log_removed, count) = opts.filter.dropped_mass(modes);
    // w = mass of the dropped strings, 1 - w = mass of the rest
    let w = count * log_removed.exp();
    let kept = 1.0 - w;

    let (filtered, filtered_se, full, full_se) = if alpha == 1.0 {
        let neg: Vec<f64> = log_pi.iter().map(|v| -v).collect();
        let (q1, se) = mean_and_stderr(&neg);
        let m_f = q1 - log_d;
        // Q_1 = -Σ_dropped π log π + (1 - w) Q̃_1
        let q_full = -w * log_removed + kept * q1;
        let se_f = match opts.errors {
            ErrorMethod::Delta => se,
            ErrorMethod::Jackknife => jackknife(&neg, |m| m),
        };
        (m_f, se_f, q_full - log_d, kept * se_f)
    } else {
        let a1 = alpha - 1.0;
        let reference = if a1 > 0.0 {
            log_pi.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        } else {
            log_pi.iter().copied().fold(f64::INFINITY, f64::min)
        };
        let ws: Vec<f64> = log_pi
            .iter()
            .map(|v| (a1 * (v - reference)).exp())
            .collect();
        let (mean_w, se_w) = mean_and_stderr(&ws);
        // log Q̃ = a1·reference + ln mean_w
        let m_f = -reference - mean_w.ln() / a1 - log_d;
        let se_f = match opts.errors {
            ErrorMethod::Delta => se_w / (mean_w * a1.abs()),
            ErrorMethod::Jackknife => jackknife(&ws, |m| -m.ln() / a1),
        };
        let log_q_tilde = a1 * reference + mean_w.ln();
        let mut terms = vec![count.ln() + alpha * log_removed];
        if kept > 0.0 {
            terms.push(kept.ln() + log_q_tilde);
        }
        let log_q = log_sum_exp(&terms);
        let m = log_q / (1.0 - alpha) - log_d;
        // d log Q / d log Q̃ = kept Q̃ / Q
        let sens = if kept > 0.0 {
            (kept.ln() + log_q_tilde - log_q).exp()
        } else {
            0.0
        };
        (m_f, se_f, m, sens * se_f)
    };
    Ok(SreEstimate {
        alpha,
        m_alpha: full,
        m_alpha_filtered: filtered,
        stderr: filtered_se,
        stderr_unfiltered: full_se,
        n_used: log_pi.len(),
        n_total: samples.len(),
        filter: opts.filter,
    })
}

/// Jackknife standard error of `f(mean)`.
fn jackknife(values: &[f64], f: impl Fn(f64) -> f64) -> f64 {
    let n = values.len() as f64;
    let total = neumaier_sum(values.iter().copied());
    let loo: Vec<f64> = values.iter().map(|v| f((total - v) / (n - 1.0))).collect();
    let (mean, _) = mean_and_stderr(&loo);
    let ss = neumaier_sum(loo.iter().map(|v| (v - mean).powi(2)));
    ((n - 1.0) / n * ss).sqrt()
}

/// Exact SREs from full enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactSre {
    pub m_alpha: f64,
    pub m_alpha_filtered: f64,
}

/// `π(x)` for every `x ∈ {0,1}^{2L}`, indexed by [`MajoranaString::index`].
pub fn characteristic_distribution(gamma: &CovarianceMatrix) -> Result<Vec<f64>> {
    Ok(log_characteristic_distribution(gamma)?
        .into_iter()
        .map(f64::exp)
        .collect())
}

/// `ln π(x)` for every string, `-∞` where `π` vanishes.
fn log_characteristic_distribution(gamma: &CovarianceMatrix) -> Result<Vec<f64>> {
    let l = gamma.modes();
    if l > MAX_EXACT_SRE_MODES {
        return Err(Error::TooLarge {
            what: "modes for exact enumeration",
            value: l,
            limit: MAX_EXACT_SRE_MODES,
        });
    }
    let n = 2 * l;
    Ok((0..1u64 << n)
        .into_par_iter()
        .map(|i| gamma.log_characteristic(&MajoranaString::from_index(i, n)))
        .collect())
}

/// `(1/(1-α)) ln Σ_i π̃_i π_i^{α-1}` with `π̃ ∝ π` over the given strings,
/// shifted by the largest (or smallest) `ln π` like the sampled estimator.
fn renyi_term(log_pi: &[f64], alpha: f64) -> f64 {
    let pi: Vec<f64> = log_pi.iter().map(|v| v.exp()).collect();
    let mass = neumaier_sum(pi.iter().copied());
    if alpha == 1.0 {
        let reference = log_pi.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let dev = neumaier_sum(pi.iter().zip(log_pi).map(|(p, v)| -p * (v - reference)));
        return -reference + dev / mass;
    }
    let a1 = alpha - 1.0;
    let reference = if a1 > 0.0 {
        log_pi.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    } else {
        log_pi.iter().copied().fold(f64::INFINITY, f64::min)
    };
    let weighted = neumaier_sum(
        pi.iter()
            .zip(log_pi)
            .map(|(p, v)| p * (a1 * (v - reference)).exp()),
    );
    -reference - (weighted / mass).ln() / a1
}

/// `M_α` and `M̃_α` by summing over all `4^L` strings.
///
/// Mixed states drop only the identity from the filtered value. When the
/// filter removes all weight (a pure single mode) the filtered value is NaN.
pub fn sre_exact(gamma: &CovarianceMatrix, alpha: f64) -> Result<ExactSre> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    let log_pi = log_characteristic_distribution(gamma)?;
    let total = neumaier_sum(log_pi.iter().map(|v| v.exp()));
    if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::Normalization(total));
    }
    let last = log_pi.len() - 1;
    let dropped = |i: usize| i == 0 || (gamma.is_pure() && i == last);
    let support = |keep: &dyn Fn(usize) -> bool| -> Vec<f64> {
        (0..log_pi.len())
            .filter(|&i| keep(i) && log_pi[i] > f64::NEG_INFINITY)
            .map(|i| log_pi[i])
            .collect()
    };
    let full = support(&|_| true);
    let kept = support(&|i| !dropped(i));
    let log_d = gamma.modes() as f64 * LN_2;
    Ok(ExactSre {
        m_alpha: renyi_term(&full, alpha) - log_d,
        m_alpha_filtered: if kept.is_empty() {
            f64::NAN
        } else {
            renyi_term(&kept, alpha) - log_d
        },
    })
}

/// `|⟨z|ψ⟩|² = |det V|_z|²` for the Slater state of `v`; zero off its sector.
pub fn participation_probability(v: &OrbitalMatrix, z: &[bool]) -> Result<f64> {
    if z.len() != v.modes() {
        return Err(Error::DimensionMismatch {
            expected: v.modes(),
            found: z.len(),
        });
    }
    let rows: Vec<usize> = (0..z.len()).filter(|&i| z[i]).collect();
    if rows.len() != v.particles() {
        return Ok(0.0);
    }
    Ok(slater_weight(v.matrix(), &rows))
}

fn slater_weight(v: &DMatrix<Complex64>, rows: &[usize]) -> f64 {
    let n = rows.len();
    let sub = DMatrix::from_fn(n, n, |a, b| v[(rows[a], b)]);
    match log_abs_det_complex(&sub).expect("isometry entries are finite") {
        Some(log_abs) => (2.0 * log_abs).exp(),
        None => 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParticipationResult {
    pub alpha: f64,
    /// `S_α = log(I_α)/(1-α)`, or the Shannon entropy at `α = 1`.
    pub s_alpha: f64,
    /// `I_α = Σ_z p^α` (equal to 1 at `α = 1`).
    pub ipr: f64,
}

/// Exact IPR and participation entropy by enumerating the `C(L, N)` sector.
pub fn pre_exact(v: &OrbitalMatrix, alpha: f64) -> Result<ParticipationResult> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    let (l, n) = (v.modes(), v.particles());
    if l > MAX_EXACT_PRE_MODES {
        return Err(Error::TooLarge {
            what: "modes for sector enumeration",
            value: l,
            limit: MAX_EXACT_PRE_MODES,
        });
    }
    let sectors: Vec<Vec<usize>> = (0..l).combinations(n).collect();
    let p: Vec<f64> = sectors
        .par_iter()
        .map(|rows| slater_weight(v.matrix(), rows))
        .collect();
    let out = if alpha == 1.0 {
        let s = neumaier_sum(p.iter().filter(|q| **q > 0.0).map(|q| -q * q.ln()));
        ParticipationResult {
            alpha,
            s_alpha: s.max(0.0),
            ipr: 1.0,
        }
    } else {
        let ipr = neumaier_sum(p.iter().filter(|q| **q > 0.0).map(|q| q.powf(alpha)));
        ParticipationResult {
            alpha,
            s_alpha: (ipr.ln() / (1.0 - alpha)).max(0.0),
            ipr,
        }
    };
    Ok(out)
}
