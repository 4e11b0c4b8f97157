//! Parameter sweeps producing ensemble-averaged filtered SREs.
//!
//! Every state and every sample batch draws from a stream derived from the
//! base seed and integer tags, and work items are collected in index order,
//! so records are reproducible and independent of the thread count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kitaev::{kitaev2d_ground_state, Kitaev2DParams};
use super::random::{random_gaussian, random_orbitals};
use crate::analytics::{avg_ipr_exact, avg_pre_annealed, EnsembleSpec};
use crate::error::{Error, Result};
use crate::gaussian::CovarianceMatrix;
use crate::magic::{pre_exact, sre_estimate, SreEstimate, MAX_EXACT_PRE_MODES};
use crate::rng::{derive_seed, seeded};
use crate::sampler::{draw_samples, Method};
use crate::stats::mean_and_stderr;

const TAG_RANDOM: u64 = 1;
const TAG_FIXED_N: u64 = 2;
const TAG_KITAEV: u64 = 3;
const TAG_STATE: u64 = 10;
const TAG_SAMPLES: u64 = 11;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub seed: u64,
    pub realizations: usize,
    pub samples: usize,
    pub method: Method,
}

impl SweepConfig {
    pub fn new(seed: u64, realizations: usize, samples: usize) -> Self {
        SweepConfig {
            seed,
            realizations,
            samples,
            method: Method::Determinant,
        }
    }

    fn validate(&self, alphas: &[f64]) -> Result<()> {
        if self.realizations == 0 || self.samples == 0 {
            return Err(Error::InvalidArgument(
                "realizations and samples must be at least 1".into(),
            ));
        }
        if alphas.is_empty() {
            return Err(Error::InvalidArgument("need at least one alpha".into()));
        }
        if let Some(a) = alphas.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
            return Err(Error::InvalidArgument(format!(
                "alpha must be positive, got {a}"
            )));
        }
        Ok(())
    }
}

/// One output row; blank columns are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub model: String,
    #[serde(rename = "L_or_ell")]
    pub size: usize,
    #[serde(rename = "N_or_blank")]
    pub particles: Option<usize>,
    pub t: Option<f64>,
    pub mu: Option<f64>,
    pub delta: Option<f64>,
    pub alpha: f64,
    pub m_filtered_mean: f64,
    pub m_filtered_stderr: f64,
    pub realizations: usize,
    pub samples: usize,
    pub seed: u64,
}

/// A fixed-N row: the sweep columns plus closed-form and per-state IPR data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedNRecord {
    pub model: String,
    #[serde(rename = "L_or_ell")]
    pub size: usize,
    #[serde(rename = "N_or_blank")]
    pub particles: Option<usize>,
    pub t: Option<f64>,
    pub mu: Option<f64>,
    pub delta: Option<f64>,
    pub alpha: f64,
    pub m_filtered_mean: f64,
    pub m_filtered_stderr: f64,
    pub realizations: usize,
    pub samples: usize,
    pub seed: u64,
    /// `E[I_α]` from the closed form (integer `α` only).
    pub ipr_exact: Option<f64>,
    /// `ln E[I_α] / (1 - α)` (integer `α ≥ 2` only).
    pub pre_annealed: Option<f64>,
    /// Mean over the drawn states of their exact `I_α` (`L ≤ 24`).
    pub ipr_ensemble_mean: Option<f64>,
}

/// Estimates for every `α` from one state, with the failing state's seed attached.
fn estimate_state(
    gamma: &CovarianceMatrix,
    alphas: &[f64],
    cfg: &SweepConfig,
    sample_seed: u64,
    state_seed: u64,
    context: impl Fn() -> String,
) -> Result<Vec<SreEstimate>> {
    let wrap = |e: Error| Error::State {
        context: context(),
        seed: state_seed,
        source: Box::new(e),
    };
    let samples = draw_samples(gamma, sample_seed, cfg.samples, cfg.method).map_err(wrap)?;
    alphas
        .iter()
        .map(|&a| sre_estimate(&samples, a, gamma.modes()).map_err(wrap))
        .collect()
}

/// `(mean, stderr)` of the filtered estimates for `α` index `ai`; with one
/// realization the stderr is that of the single estimate.
fn aggregate(per_state: &[Vec<SreEstimate>], ai: usize, scale: f64) -> (f64, f64) {
    if per_state.len() == 1 {
        let e = &per_state[0][ai];
        return (e.m_alpha_filtered * scale, e.stderr * scale);
    }
    let vals: Vec<f64> = per_state
        .iter()
        .map(|s| s[ai].m_alpha_filtered * scale)
        .collect();
    mean_and_stderr(&vals)
}

/// Haar-random Gaussian states at each `L`; one record per `(L, α)`.
pub fn sweep_random(
    modes: &[usize],
    alphas: &[f64],
    cfg: &SweepConfig,
) -> Result<Vec<SweepRecord>> {
    cfg.validate(alphas)?;
    let mut out = Vec::new();
    for &l in modes {
        if l < 2 {
            return Err(Error::InvalidArgument(format!(
                "need L >= 2 for filtered SREs, got {l}"
            )));
        }
        let per_state: Vec<Vec<SreEstimate>> = (0..cfg.realizations)
            .into_par_iter()
            .map(|r| {
                let tags = [TAG_RANDOM, l as u64, r as u64];
                let state_seed = derive_seed(cfg.seed, &[&tags[..], &[TAG_STATE]].concat());
                let sample_seed = derive_seed(cfg.seed, &[&tags[..], &[TAG_SAMPLES]].concat());
                let gamma = random_gaussian(l, &mut seeded(state_seed));
                estimate_state(&gamma, alphas, cfg, sample_seed, state_seed, || {
                    format!("random-sre L={l} realization {r}")
                })
            })
            .collect::<Result<_>>()?;
        for (ai, &alpha) in alphas.iter().enumerate() {
            let (mean, se) = aggregate(&per_state, ai, 1.0);
            out.push(SweepRecord {
                model: "random".into(),
                size: l,
                particles: None,
                t: None,
                mu: None,
                delta: None,
                alpha,
                m_filtered_mean: mean,
                m_filtered_stderr: se,
                realizations: cfg.realizations,
                samples: cfg.samples,
                seed: cfg.seed,
            });
        }
    }
    Ok(out)
}

/// Haar-random Slater states with `N` particles; one record per `(N, α)`.
pub fn sweep_fixed_n(
    modes: usize,
    particles: &[usize],
    alphas: &[f64],
    cfg: &SweepConfig,
) -> Result<Vec<FixedNRecord>> {
    cfg.validate(alphas)?;
    if modes < 2 {
        return Err(Error::InvalidArgument(format!(
            "need L >= 2 for filtered SREs, got {modes}"
        )));
    }
    let mut out = Vec::new();
    for &n in particles {
        if n > modes {
            return Err(Error::InvalidArgument(format!(
                "{n} particles do not fit in {modes} modes"
            )));
        }
        let per_state: Vec<(Vec<SreEstimate>, Vec<f64>)> = (0..cfg.realizations)
            .into_par_iter()
            .map(|r| {
                let tags = [TAG_FIXED_N, modes as u64, n as u64, r as u64];
                let state_seed = derive_seed(cfg.seed, &[&tags[..], &[TAG_STATE]].concat());
                let sample_seed = derive_seed(cfg.seed, &[&tags[..], &[TAG_SAMPLES]].concat());
                let v = random_orbitals(modes, n, &mut seeded(state_seed))?;
                let gamma = CovarianceMatrix::from_orbitals(&v);
                let est = estimate_state(&gamma, alphas, cfg, sample_seed, state_seed, || {
                    format!("fixed-n L={modes} N={n} realization {r}")
                })?;
                let iprs = if modes <= MAX_EXACT_PRE_MODES {
                    alphas
                        .iter()
                        .map(|&a| pre_exact(&v, a).map(|p| p.ipr))
                        .collect::<Result<Vec<_>>>()?
                } else {
                    Vec::new()
                };
                Ok((est, iprs))
            })
            .collect::<Result<_>>()?;
        let estimates: Vec<Vec<SreEstimate>> = per_state.iter().map(|(e, _)| e.clone()).collect();
        for (ai, &alpha) in alphas.iter().enumerate() {
            let (mean, se) = aggregate(&estimates, ai, 1.0);
            let integer = (alpha.fract() == 0.0).then_some(alpha as u32);
            let spec = integer.and_then(|a| EnsembleSpec::new(modes as u64, n as u64, a).ok());
            let ipr_mean = (modes <= MAX_EXACT_PRE_MODES).then(|| {
                let v: Vec<f64> = per_state.iter().map(|(_, i)| i[ai]).collect();
                mean_and_stderr(&v).0
            });
            out.push(FixedNRecord {
                model: "fixed-n".into(),
                size: modes,
                particles: Some(n),
                t: None,
                mu: None,
                delta: None,
                alpha,
                m_filtered_mean: mean,
                m_filtered_stderr: se,
                realizations: cfg.realizations,
                samples: cfg.samples,
                seed: cfg.seed,
                ipr_exact: spec.as_ref().map(avg_ipr_exact),
                pre_annealed: spec.as_ref().and_then(|s| avg_pre_annealed(s).ok()),
                ipr_ensemble_mean: ipr_mean,
            });
        }
    }
    Ok(out)
}

/// Ground states over a parameter grid; records carry the density `M̃_α / ℓ²`.
///
/// `cfg.realizations` is ignored (the ground state is deterministic).
pub fn sweep_kitaev(
    grid: &[Kitaev2DParams],
    alphas: &[f64],
    cfg: &SweepConfig,
) -> Result<Vec<SweepRecord>> {
    let cfg = SweepConfig {
        realizations: 1,
        ..*cfg
    };
    cfg.validate(alphas)?;
    let per_point: Vec<Vec<SreEstimate>> = grid
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let gamma = kitaev2d_ground_state(p)?;
            let sample_seed = derive_seed(cfg.seed, &[TAG_KITAEV, i as u64, TAG_SAMPLES]);
            estimate_state(&gamma, alphas, &cfg, sample_seed, sample_seed, || {
                format!("kitaev2d ell={} mu={} delta={}", p.ell, p.mu, p.delta)
            })
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for (p, est) in grid.iter().zip(&per_point) {
        let scale = 1.0 / p.modes() as f64;
        for (ai, &alpha) in alphas.iter().enumerate() {
            let (mean, se) = aggregate(std::slice::from_ref(est), ai, scale);
            out.push(SweepRecord {
                model: "kitaev2d".into(),
                size: p.ell,
                particles: None,
                t: Some(p.t),
                mu: Some(p.mu),
                delta: Some(p.delta),
                alpha,
                m_filtered_mean: mean,
                m_filtered_stderr: se,
                realizations: 1,
                samples: cfg.samples,
                seed: cfg.seed,
            });
        }
    }
    Ok(out)
}
