//! Spinless p+ip superconductor on an `ℓ x ℓ` periodic square lattice.
//!
//! ```text
//! H = ½ Σ_k (c_k†, c_{-k}) [[ε_k, Δ_k], [Δ_k*, -ε_k]] (c_k, c_{-k}†)ᵀ
//! ε_k = -(μ - 4t) - 2t (cos k_x + cos k_y)
//! Δ_k = 2iΔ (sin k_x + i sin k_y)
//! ```
//!
//! Site `(x, y)` is mode `x + ℓ y`, momenta are `k = 2π m / ℓ`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::CovarianceMatrix;

/// `|ε_k|` below this counts as zero, so band touchings land exactly on the tie-break.
const EPS_SNAP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kitaev2DParams {
    pub ell: usize,
    pub t: f64,
    pub mu: f64,
    pub delta: f64,
}

impl Kitaev2DParams {
    pub fn new(ell: usize, t: f64, mu: f64, delta: f64) -> Result<Self> {
        let p = Kitaev2DParams { ell, t, mu, delta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.ell < 2 {
            return Err(Error::InvalidArgument(format!(
                "ell must be at least 2, got {}",
                self.ell
            )));
        }
        if !(self.t > 0.0 && self.t.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "t must be positive, got {}",
                self.t
            )));
        }
        if !(self.mu.is_finite() && self.delta.is_finite()) {
            return Err(Error::InvalidArgument("mu and delta must be finite".into()));
        }
        Ok(())
    }

    pub fn modes(&self) -> usize {
        self.ell * self.ell
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionPoint {
    pub k: (f64, f64),
    pub eps: f64,
    pub delta_k: Complex64,
    pub energy: f64,
}

impl DispersionPoint {
    /// `⟨c_k† c_k⟩`; zero-energy modes stay empty.
    fn occupation(&self) -> f64 {
        if self.energy == 0.0 {
            0.0
        } else {
            0.5 * (1.0 - self.eps / self.energy)
        }
    }

    /// `⟨c_k c_{-k}⟩`
    fn pairing(&self) -> Complex64 {
        if self.energy == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            self.delta_k / (2.0 * self.energy)
        }
    }
}

/// `(cos, sin)` of `2π j / ℓ` for `j` in `0..ℓ`, exact at multiples of `π/2`.
fn unit_circle(ell: usize) -> Vec<(f64, f64)> {
    (0..ell)
        .map(|j| {
            if (4 * j) % ell == 0 {
                match 4 * j / ell {
                    0 => (1.0, 0.0),
                    1 => (0.0, 1.0),
                    2 => (-1.0, 0.0),
                    _ => (0.0, -1.0),
                }
            } else {
                let a = 2.0 * PI * j as f64 / ell as f64;
                (a.cos(), a.sin())
            }
        })
        .collect()
}

/// `ε_k`, `Δ_k` and `E_k` on the momentum grid, indexed like sites (`m_x + ℓ m_y`).
pub fn dispersion(p: &Kitaev2DParams) -> Vec<DispersionPoint> {
    let ell = p.ell;
    let circle = unit_circle(ell);
    let mut out = Vec::with_capacity(ell * ell);
    for my in 0..ell {
        for mx in 0..ell {
            let (cx, sx) = circle[mx];
            let (cy, sy) = circle[my];
            let mut eps = -(p.mu - 4.0 * p.t) - 2.0 * p.t * (cx + cy);
            if eps.abs() < EPS_SNAP {
                eps = 0.0;
            }
            // 2iΔ (sx + i sy) = -2Δ sy + 2iΔ sx
            let delta_k = Complex64::new(-2.0 * p.delta * sy, 2.0 * p.delta * sx);
            let energy = eps.hypot(delta_k.norm());
            let k = (
                2.0 * PI * mx as f64 / ell as f64,
                2.0 * PI * my as f64 / ell as f64,
            );
            out.push(DispersionPoint {
                k,
                eps,
                delta_k,
                energy,
            });
        }
    }
    out
}

/// `½ Σ_k ε_k - ½ Σ_k E_k`, the ground-state energy of
/// `Σ_k ε_k c_k† c_k + ½ Σ_k (Δ_k c_k† c_{-k}† + h.c.)`.
pub fn ground_state_energy(p: &Kitaev2DParams) -> f64 {
    dispersion(p).iter().map(|d| 0.5 * (d.eps - d.energy)).sum()
}

/// Covariance matrix of the BdG ground state.
///
/// Modes with `E_k = 0` (band touching without pairing) are left empty.
pub fn kitaev2d_ground_state(p: &Kitaev2DParams) -> Result<CovarianceMatrix> {
    p.validate()?;
    let ell = p.ell;
    let n = p.modes();
    let disp = dispersion(p);
    let circle = unit_circle(ell);
    let occ: Vec<f64> = disp.iter().map(DispersionPoint::occupation).collect();
    let pair: Vec<Complex64> = disp.iter().map(DispersionPoint::pairing).collect();
    // particles or holes, whichever band is emptier, so full and empty bands come out exact
    let holes = occ.iter().sum::<f64>() > 0.5 * n as f64;
    let weight: Vec<f64> = occ
        .iter()
        .map(|&o| if holes { 1.0 - o } else { o })
        .collect();
    let inv_n = 1.0 / n as f64;

    // g(d) = (1/N) Σ_k n_k e^{ik·d},  f(d) = (1/N) Σ_k e^{ik·d} ⟨c_k c_{-k}⟩
    let mut g = vec![Complex64::new(0.0, 0.0); n];
    let mut f = vec![Complex64::new(0.0, 0.0); n];
    for dy in 0..ell {
        for dx in 0..ell {
            let d = dx + ell * dy;
            let mut gs = Complex64::new(0.0, 0.0);
            let mut fs = Complex64::new(0.0, 0.0);
            for my in 0..ell {
                for mx in 0..ell {
                    let m = mx + ell * my;
                    let (c, s) = circle[(mx * dx + my * dy) % ell];
                    let phase = Complex64::new(c, s);
                    if weight[m] != 0.0 {
                        gs += phase * weight[m];
                    }
                    if pair[m] != Complex64::new(0.0, 0.0) {
                        fs += phase * pair[m];
                    }
                }
            }
            g[d] = gs * inv_n;
            f[d] = fs * inv_n;
        }
    }
    if holes {
        for v in g.iter_mut() {
            *v = -*v;
        }
        g[0] += 1.0;
    }

    let offset = |a: usize, b: usize| {
        let (ax, ay) = (a % ell, a / ell);
        let (bx, by) = (b % ell, b / ell);
        (ax + ell - bx) % ell + ell * ((ay + ell - by) % ell)
    };
    // G_{rr'} = g(r' - r),  F_{rr'} = f(r - r')
    let gm = DMatrix::from_fn(n, n, |r, rp| g[offset(rp, r)]);
    let fm = DMatrix::from_fn(n, n, |r, rp| f[offset(r, rp)]);
    CovarianceMatrix::from_correlations(&gm, &fm)
}
