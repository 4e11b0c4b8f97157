//! Perfect sampling of Majorana strings from the characteristic distribution.
//!
//! The distribution is sampled bit by bit. With `M_μ = 1_{[μ, 2L)} + Γ` the
//! marginal of a prefix `x_0 … x_{μ-1}` is
//!
//! ```text
//! π(x_0 … x_{μ-1}) = det[M_μ |_{ {i < μ : x_i = 1} ∪ [μ, 2L) }] / det[1 + Γ],
//! ```
//!
//! so each conditional is a ratio of two principal minors.

use std::io::Write;

use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{CovarianceMatrix, MajoranaString};
use crate::linalg::{det_in_place, Scaled};
use crate::rng::sample_stream;

/// Allowed deviation of `π(0|·) + π(1|·)` from one.
pub const CONDITIONAL_SUM_TOLERANCE: f64 = 1e-6;
/// Most negative conditional accepted before it is treated as a failure.
pub const NEGATIVE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct MajoranaSample {
    pub x: MajoranaString,
    /// `ln π(x)`
    pub log_prob: f64,
}

/// How each conditional is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Two fresh pivoted-LU determinants per bit, `O(L⁴)` per sample.
    #[default]
    Determinant,
    /// Rank-one updates of `(1 + Γ)⁻¹`, `O(L³)` per sample.
    Schur,
}

#[derive(Debug, Clone)]
pub struct SamplerConfig {
    pub seed: u64,
    pub num_samples: usize,
    pub workers: usize,
    pub method: Method,
}

impl SamplerConfig {
    /// Uses all available cores and the determinant method.
    pub fn new(seed: u64, num_samples: usize) -> Self {
        SamplerConfig {
            seed,
            num_samples,
            workers: default_workers(),
            method: Method::Determinant,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.num_samples == 0 {
            return Err(Error::InvalidArgument(
                "num_samples must be at least 1".into(),
            ));
        }
        if self.workers == 0 {
            return Err(Error::InvalidArgument("workers must be at least 1".into()));
        }
        Ok(())
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Row-major copy of Γ, shared by all steps of a sample.
struct Kernel {
    n: usize,
    data: Vec<f64>,
}

impl Kernel {
    fn new(gamma: &DMatrix<f64>) -> Self {
        let n = gamma.nrows();
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(gamma[(i, j)]);
            }
        }
        Kernel { n, data }
    }

    /// `det` of Γ restricted to `idx`, plus one on the diagonal for indices `>= plus_from`.
    fn minor(&self, idx: &[usize], plus_from: usize, buf: &mut Vec<f64>) -> Scaled {
        let k = idx.len();
        buf.clear();
        for &i in idx {
            let row = &self.data[i * self.n..(i + 1) * self.n];
            for &j in idx {
                buf.push(row[j]);
            }
        }
        for (a, &i) in idx.iter().enumerate() {
            if i >= plus_from {
                buf[a * k + a] += 1.0;
            }
        }
        det_in_place(buf, k)
    }
}

fn check_prefix(gamma: &CovarianceMatrix, prefix: &[bool]) -> Result<()> {
    let n = gamma.gamma().nrows();
    if prefix.len() > n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: prefix.len(),
        });
    }
    Ok(())
}

/// `π(x_0 … x_{μ-1})` for a prefix of length `μ ≤ 2L`, clamped to `[0, 1]`.
pub fn marginal_probability(gamma: &CovarianceMatrix, prefix: &[bool]) -> Result<f64> {
    Ok(log_marginal_probability(gamma, prefix)?
        .exp()
        .clamp(0.0, 1.0))
}

/// `ln π(x_0 … x_{μ-1})`; `-inf` when the marginal vanishes.
pub fn log_marginal_probability(gamma: &CovarianceMatrix, prefix: &[bool]) -> Result<f64> {
    check_prefix(gamma, prefix)?;
    let mu = prefix.len();
    if mu == 0 {
        return Ok(0.0);
    }
    let kernel = Kernel::new(gamma.gamma());
    let idx: Vec<usize> = (0..mu).filter(|&i| prefix[i]).chain(mu..kernel.n).collect();
    let d = kernel.minor(&idx, mu, &mut Vec::new());
    if d.sign() <= 0 {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(d.ln_abs() - gamma.log_normalization())
}

/// Renormalized conditional pair `(p0, p1)` from two raw ratios.
fn conditional_pair(step: usize, p0: f64, p1: f64) -> Result<(f64, f64)> {
    if !(p0.is_finite() && p1.is_finite()) {
        return Err(Error::NumericalFailure {
            step,
            detail: format!("non-finite conditionals ({p0}, {p1})"),
        });
    }
    if p0 < -NEGATIVE_TOLERANCE || p1 < -NEGATIVE_TOLERANCE {
        return Err(Error::NumericalFailure {
            step,
            detail: format!("negative conditional ({p0:.3e}, {p1:.3e})"),
        });
    }
    let sum = p0 + p1;
    if (sum - 1.0).abs() > CONDITIONAL_SUM_TOLERANCE {
        return Err(Error::NumericalFailure {
            step,
            detail: format!("conditionals sum to {sum:.12} instead of 1"),
        });
    }
    let (p0, p1) = (p0.max(0.0) / sum, p1.max(0.0) / sum);
    Ok(if p0 <= p1 {
        (p0, 1.0 - p0)
    } else {
        (1.0 - p1, p1)
    })
}

/// Draws bit `μ` given `π(x_μ = 1 | prefix)`; exact 0 and 1 consume no randomness.
fn draw_bit<R: Rng + ?Sized>(p1: f64, rng: &mut R) -> bool {
    if p1 <= 0.0 {
        false
    } else if p1 >= 1.0 {
        true
    } else {
        rng.random::<f64>() < p1
    }
}

fn sample_determinant<R: Rng + ?Sized>(
    gamma: &CovarianceMatrix,
    rng: &mut R,
) -> Result<MajoranaSample> {
    let kernel = Kernel::new(gamma.gamma());
    let n = kernel.n;
    let mut bits = Vec::with_capacity(n);
    let mut kept: Vec<usize> = Vec::with_capacity(n);
    let mut idx = Vec::with_capacity(n);
    let mut buf = Vec::with_capacity(n * n);
    // det of the current marginal numerator; starts at det(1 + Γ)
    let mut prev = kernel.minor(&(0..n).collect::<Vec<_>>(), 0, &mut buf);
    let mut prob = Scaled::ONE;
    for mu in 0..n {
        idx.clear();
        idx.extend_from_slice(&kept);
        idx.push(mu);
        idx.extend(mu + 1..n);
        let d1 = kernel.minor(&idx, mu + 1, &mut buf);
        idx.remove(kept.len());
        let d0 = kernel.minor(&idx, mu + 1, &mut buf);
        let (p0, p1) = conditional_pair(mu, (d0 / prev).to_f64(), (d1 / prev).to_f64())?;
        let bit = draw_bit(p1, rng);
        if bit {
            kept.push(mu);
            prev = d1;
            prob = prob * Scaled::from_f64(p1);
        } else {
            prev = d0;
            prob = prob * Scaled::from_f64(p0);
        }
        bits.push(bit);
    }
    Ok(MajoranaSample {
        x: MajoranaString::new(bits),
        log_prob: prob.ln_abs(),
    })
}

fn sample_schur<R: Rng + ?Sized>(gamma: &CovarianceMatrix, rng: &mut R) -> Result<MajoranaSample> {
    let g = gamma.gamma();
    let n = g.nrows();
    let shifted = g + DMatrix::<f64>::identity(n, n);
    let inv = shifted.lu().try_inverse().ok_or(Error::NumericalFailure {
        step: 0,
        detail: "1 + Γ is singular".into(),
    })?;
    // row-major K = (1 + Γ)⁻¹ restricted to the undecided indices
    let mut k: Vec<f64> = (0..n * n).map(|a| inv[(a / n, a % n)]).collect();
    let mut bits = Vec::with_capacity(n);
    let mut prob = Scaled::ONE;
    for mu in 0..n {
        let kmm = k[mu * n + mu];
        let (p0, p1) = conditional_pair(mu, kmm, 1.0 - kmm)?;
        let bit = draw_bit(p1, rng);
        bits.push(bit);
        prob = prob * Scaled::from_f64(if bit { p1 } else { p0 });
        if mu + 1 == n {
            break;
        }
        // x = 0 removes index μ (Schur complement); x = 1 drops its +1 (Sherman–Morrison)
        let scale = if bit { 1.0 / (1.0 - kmm) } else { -1.0 / kmm };
        // column μ below the diagonal is never written by the update
        for j in mu + 1..n {
            let cj = k[j * n + mu] * scale;
            if cj == 0.0 {
                continue;
            }
            let row_mu = mu * n;
            let row_j = j * n;
            for l in mu + 1..n {
                k[row_j + l] += cj * k[row_mu + l];
            }
        }
    }
    Ok(MajoranaSample {
        x: MajoranaString::new(bits),
        log_prob: prob.ln_abs(),
    })
}

/// One exact sample using the determinant method.
pub fn sample_one<R: Rng + ?Sized>(
    gamma: &CovarianceMatrix,
    rng: &mut R,
) -> Result<MajoranaSample> {
    sample_determinant(gamma, rng)
}

pub fn sample_one_with<R: Rng + ?Sized>(
    gamma: &CovarianceMatrix,
    method: Method,
    rng: &mut R,
) -> Result<MajoranaSample> {
    match method {
        Method::Determinant => sample_determinant(gamma, rng),
        Method::Schur => sample_schur(gamma, rng),
    }
}

/// `cfg.num_samples` samples; sample `i` uses `sample_stream(cfg.seed, i)`.
///
/// Runs on a dedicated pool of `cfg.workers` threads. The output does not
/// depend on the worker count.
pub fn sample_batch(gamma: &CovarianceMatrix, cfg: &SamplerConfig) -> Result<Vec<MajoranaSample>> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::ThreadPool(e.to_string()))?;
    pool.install(|| draw_samples(gamma, cfg.seed, cfg.num_samples, cfg.method))
}

/// Same streams as [`sample_batch`], run on the current rayon pool.
pub fn draw_samples(
    gamma: &CovarianceMatrix,
    seed: u64,
    num_samples: usize,
    method: Method,
) -> Result<Vec<MajoranaSample>> {
    (0..num_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_stream(seed, i as u64);
            sample_one_with(gamma, method, &mut rng).map_err(|e| Error::Sample {
                index: i,
                source: Box::new(e),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SampleRecord {
    pub sample_index: usize,
    pub x: String,
    pub log_prob: f64,
}

pub fn sample_records(samples: &[MajoranaSample]) -> Vec<SampleRecord> {
    samples
        .iter()
        .enumerate()
        .map(|(i, s)| SampleRecord {
            sample_index: i,
            x: s.x.to_string(),
            log_prob: s.log_prob,
        })
        .collect()
}

pub fn write_csv<W: Write>(samples: &[MajoranaSample], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in sample_records(samples) {
        w.serialize(r)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_json<W: Write>(samples: &[MajoranaSample], out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, &sample_records(samples))?;
    Ok(())
}
