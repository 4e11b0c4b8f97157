//! Brute-force `2^L` state vectors, independent of the covariance and
//! Pfaffian code, for cross-checking at small `L`.
//!
//! Qubit `i` (bit `i` of a basis index) is mode `i`. Majoranas are the
//! Jordan–Wigner strings `γ_{2i} = Z_0…Z_{i-1} X_i` and
//! `γ_{2i+1} = Z_0…Z_{i-1} Y_i` (0-based), so `c_i† = Z_0…Z_{i-1} |1⟩⟨0|_i` and
//! the Fock state `(c_0†)^{z_0}…(c_{L-1}†)^{z_{L-1}}|0⟩` is the basis state `z`.

use std::f64::consts::LN_2;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gaussian::{MajoranaString, OrbitalMatrix};

pub const MAX_ROTATION_MODES: usize = 12;
pub const MAX_ORBITAL_MODES: usize = 20;
pub const MAX_DISTRIBUTION_MODES: usize = 7;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone)]
pub struct DenseState {
    modes: usize,
    amps: Vec<Complex64>,
}

impl DenseState {
    pub fn vacuum(modes: usize) -> Self {
        let mut amps = vec![ZERO; 1 << modes];
        amps[0] = Complex64::new(1.0, 0.0);
        DenseState { modes, amps }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `γ_μ |ψ⟩`
    pub fn majorana(&self, mu: usize) -> DenseState {
        let m = mu / 2;
        let below = (1usize << m) - 1;
        let bit = 1usize << m;
        let mut out = vec![ZERO; self.amps.len()];
        for (b, &a) in self.amps.iter().enumerate() {
            if a == ZERO {
                continue;
            }
            let string = if (b & below).count_ones() % 2 == 1 {
                -1.0
            } else {
                1.0
            };
            // X|0⟩ = |1⟩, X|1⟩ = |0⟩; Y|0⟩ = i|1⟩, Y|1⟩ = -i|0⟩
            let local = if mu.is_multiple_of(2) {
                Complex64::new(1.0, 0.0)
            } else if b & bit == 0 {
                I
            } else {
                -I
            };
            out[b ^ bit] += a * local * string;
        }
        DenseState {
            modes: self.modes,
            amps: out,
        }
    }

    /// `c_i |ψ⟩`
    pub fn annihilate(&self, i: usize) -> DenseState {
        self.ladder(i, false)
    }

    /// `c_i† |ψ⟩`
    pub fn create(&self, i: usize) -> DenseState {
        self.ladder(i, true)
    }

    fn ladder(&self, i: usize, create: bool) -> DenseState {
        let bit = 1usize << i;
        let below = bit - 1;
        let mut out = vec![ZERO; self.amps.len()];
        for (b, &a) in self.amps.iter().enumerate() {
            let occupied = b & bit != 0;
            if occupied == create {
                continue;
            }
            let string = if (b & below).count_ones() % 2 == 1 {
                -1.0
            } else {
                1.0
            };
            out[b ^ bit] += a * string;
        }
        DenseState {
            modes: self.modes,
            amps: out,
        }
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &DenseState) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `exp(θ γ_p γ_q / 2) |ψ⟩`
    fn rotate_pair(&self, p: usize, q: usize, theta: f64) -> DenseState {
        let pq = self.majorana(q).majorana(p);
        let (c, s) = ((0.5 * theta).cos(), (0.5 * theta).sin());
        DenseState {
            modes: self.modes,
            amps: self
                .amps
                .iter()
                .zip(&pq.amps)
                .map(|(a, b)| a * c + b * s)
                .collect(),
        }
    }
}

/// Givens factors `(p, q, φ)` with `O = R_1 R_2 … R_K`, where `R(p, q, φ)`
/// has `cos φ` on `(p,p), (q,q)`, `sin φ` on `(p,q)` and `-sin φ` on `(q,p)`.
fn givens_factors(o: &DMatrix<f64>) -> Vec<(usize, usize, f64)> {
    let n = o.nrows();
    let mut a = o.clone();
    let mut eliminations = Vec::new();
    for j in 0..n {
        for i in (j + 1..n).rev() {
            let (x, y) = (a[(j, j)], a[(i, j)]);
            if y == 0.0 {
                continue;
            }
            let r = x.hypot(y);
            let (c, s) = (x / r, y / r);
            for k in 0..n {
                let (u, v) = (a[(j, k)], a[(i, k)]);
                a[(j, k)] = c * u + s * v;
                a[(i, k)] = -s * u + c * v;
            }
            eliminations.push((j, i, s.atan2(c)));
        }
        // a skipped column can leave a -1 pivot; a π rotation moves it down
        if a[(j, j)] < 0.0 && j + 1 < n {
            for k in 0..n {
                a[(j, k)] = -a[(j, k)];
                a[(j + 1, k)] = -a[(j + 1, k)];
            }
            eliminations.push((j, j + 1, std::f64::consts::PI));
        }
    }
    // G_K … G_1 O = 1, so O = G_1ᵀ … G_Kᵀ and each transpose flips the angle
    eliminations
        .into_iter()
        .map(|(p, q, phi)| (p, q, -phi))
        .collect()
}

/// `W|0⟩` for the Gaussian unitary with `W† γ_μ W = Σ_ν O_{μν} γ_ν`, any `O ∈ O(2L)`.
pub fn statevector_from_rotation(o: &DMatrix<f64>, modes: usize) -> Result<DenseState> {
    if modes > MAX_ROTATION_MODES {
        return Err(Error::TooLarge {
            what: "modes for the dense oracle",
            value: modes,
            limit: MAX_ROTATION_MODES,
        });
    }
    if o.nrows() != 2 * modes || o.ncols() != 2 * modes {
        return Err(Error::DimensionMismatch {
            expected: 2 * modes,
            found: o.nrows(),
        });
    }
    let res = (o * o.transpose() - DMatrix::<f64>::identity(2 * modes, 2 * modes)).amax();
    if res > 1e-10 {
        return Err(Error::NotOrthogonal(res));
    }
    // det O = -1: O = O' D with D = diag(1, -1, …, -1), and conjugation by γ_0 realizes D
    let (start, proper) = if o.determinant() < 0.0 {
        let mut od = -o.clone();
        od.column_mut(0).neg_mut();
        (DenseState::vacuum(modes).majorana(0), od)
    } else {
        (DenseState::vacuum(modes), o.clone())
    };
    // W = U_1 … U_K with U_k = exp(φ_k γ_p γ_q / 2); the last factor acts first
    let mut psi = start;
    for &(p, q, phi) in givens_factors(&proper).iter().rev() {
        psi = psi.rotate_pair(p, q, phi);
    }
    Ok(psi)
}

/// The Slater state `Π_n (Σ_i V_in c_i†) |0⟩`, amplitude `det V|_z` on each sector configuration.
pub fn statevector_from_orbitals(v: &OrbitalMatrix) -> Result<DenseState> {
    let (l, n) = (v.modes(), v.particles());
    if l > MAX_ORBITAL_MODES {
        return Err(Error::TooLarge {
            what: "modes for the dense oracle",
            value: l,
            limit: MAX_ORBITAL_MODES,
        });
    }
    let vm = v.matrix();
    let amps = (0..1usize << l)
        .into_par_iter()
        .map(|b| {
            if b.count_ones() as usize != n {
                return ZERO;
            }
            let rows: Vec<usize> = (0..l).filter(|&i| b >> i & 1 == 1).collect();
            DMatrix::from_fn(n, n, |r, c| vm[(rows[r], c)]).determinant()
        })
        .collect();
    Ok(DenseState { modes: l, amps })
}

/// `Γ_{μν} = -i ⟨γ_μ γ_ν⟩` for `μ ≠ ν`, by direct operator application.
pub fn covariance_from_state(psi: &DenseState) -> DMatrix<f64> {
    let n = 2 * psi.modes;
    let applied: Vec<DenseState> = (0..n).map(|mu| psi.majorana(mu)).collect();
    let mut g = DMatrix::zeros(n, n);
    for mu in 0..n {
        for nu in 0..n {
            if mu != nu {
                // ⟨ψ|γ_μ γ_ν|ψ⟩ = ⟨γ_μ ψ|γ_ν ψ⟩ since γ_μ is Hermitian
                g[(mu, nu)] = (-I * applied[mu].inner(&applied[nu])).re;
            }
        }
    }
    g
}

/// `(G, F)` with `G_ij = ⟨c_i† c_j⟩` and `F_ij = ⟨c_i c_j⟩`.
pub fn correlations_from_state(psi: &DenseState) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    let l = psi.modes;
    let ann: Vec<DenseState> = (0..l).map(|i| psi.annihilate(i)).collect();
    let g = DMatrix::from_fn(l, l, |i, j| ann[i].inner(&ann[j]));
    let f = DMatrix::from_fn(l, l, |i, j| psi.inner(&ann[j].annihilate(i)));
    (g, f)
}

/// Pauli string as `(xmask, zmask)`, `P = Π_i i^{x_i z_i} X_i^{x_i} Z_i^{z_i}`.
pub type Pauli = (u64, u64);

/// The Pauli string equal (up to a phase) to the Majorana monomial `γ^x`.
pub fn pauli_of_majorana(x: &MajoranaString) -> Pauli {
    let mut xm = 0u64;
    let mut zm = 0u64;
    for mu in x.support() {
        let m = mu / 2;
        xm ^= 1 << m;
        zm ^= (1u64 << m) - 1;
        if mu % 2 == 1 {
            zm ^= 1 << m;
        }
    }
    (xm, zm)
}

/// Index of a Pauli string in [`exact_characteristic_distribution`]: `xmask | zmask << L`.
pub fn pauli_index((xm, zm): Pauli, modes: usize) -> usize {
    (xm | zm << modes) as usize
}

/// `⟨ψ|P|ψ⟩` by bit manipulation.
pub fn pauli_expectation(psi: &DenseState, (xm, zm): Pauli) -> Complex64 {
    let y_phase = I.powu((xm & zm).count_ones());
    let mut acc = ZERO;
    for (b, &a) in psi.amps.iter().enumerate() {
        if a == ZERO {
            continue;
        }
        let sign = if (b as u64 & zm).count_ones() % 2 == 1 {
            -1.0
        } else {
            1.0
        };
        acc += psi.amps[b ^ xm as usize].conj() * a * sign;
    }
    acc * y_phase
}

/// `π(P) = ⟨ψ|P|ψ⟩² / D` over all `4^L` Pauli strings, indexed by [`pauli_index`].
pub fn exact_characteristic_distribution(psi: &DenseState) -> Result<Vec<f64>> {
    let l = psi.modes;
    if l > MAX_DISTRIBUTION_MODES {
        return Err(Error::TooLarge {
            what: "modes for Pauli enumeration",
            value: l,
            limit: MAX_DISTRIBUTION_MODES,
        });
    }
    let d = (1u64 << l) as f64;
    let mask = (1u64 << l) - 1;
    let pi: Vec<f64> = (0..1u64 << (2 * l))
        .into_par_iter()
        .map(|idx| pauli_expectation(psi, (idx & mask, idx >> l)).norm_sqr() / d)
        .collect();
    let total: f64 = pi.iter().sum();
    if (total - 1.0).abs() > 1e-8 {
        return Err(Error::Normalization(total));
    }
    Ok(pi)
}

/// `(M_α, M̃_α)` from a Pauli distribution, removing the identity and `Z…Z`
/// and using `log Σ π̃^α / (1-α) - log(D - 2)` for the filtered value.
pub fn sre_from_distribution(pi: &[f64], modes: usize, alpha: f64) -> (f64, f64) {
    let d = (1u64 << modes) as f64;
    let parity = pauli_index((0, (1u64 << modes) - 1), modes);
    let kept_mass: f64 = pi
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != 0 && i != parity)
        .map(|(_, p)| p)
        .sum();
    let filtered = pi
        .iter()
        .enumerate()
        .filter(|&(i, &p)| i != 0 && i != parity && p > 0.0)
        .map(|(_, p)| p / kept_mass);
    let all = pi.iter().copied().filter(|&p| p > 0.0);
    let log_d = modes as f64 * LN_2;
    if alpha == 1.0 {
        let m: f64 = all.map(|p| -p * p.ln()).sum();
        let mf: f64 = filtered.map(|p| -p * p.ln()).sum();
        (m - log_d, mf - (d - 2.0).ln())
    } else {
        let m: f64 = all.map(|p| p.powf(alpha)).sum();
        let mf: f64 = filtered.map(|p| p.powf(alpha)).sum();
        (
            m.ln() / (1.0 - alpha) - log_d,
            mf.ln() / (1.0 - alpha) - (d - 2.0).ln(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane_rotation(n: usize, p: usize, q: usize, phi: f64) -> DMatrix<f64> {
        let mut o = DMatrix::identity(n, n);
        o[(p, p)] = phi.cos();
        o[(q, q)] = phi.cos();
        o[(p, q)] = phi.sin();
        o[(q, p)] = -phi.sin();
        o
    }

    fn vacuum_gamma(l: usize) -> DMatrix<f64> {
        let mut g = DMatrix::zeros(2 * l, 2 * l);
        for i in 0..l {
            g[(2 * i, 2 * i + 1)] = 1.0;
            g[(2 * i + 1, 2 * i)] = -1.0;
        }
        g
    }

    #[test]
    fn identity_gives_vacuum() {
        let psi = statevector_from_rotation(&DMatrix::identity(6, 6), 3).unwrap();
        assert_eq!(psi.amplitudes()[0], Complex64::new(1.0, 0.0));
        assert_eq!(covariance_from_state(&psi), vacuum_gamma(3));
    }

    #[test]
    fn single_rotation_matches_conjugation() {
        let o = plane_rotation(4, 1, 2, 0.4);
        let psi = statevector_from_rotation(&o, 2).unwrap();
        let expect = &o * vacuum_gamma(2) * o.transpose();
        assert!((covariance_from_state(&psi) - expect).amax() < 1e-12);
    }

    #[test]
    fn composite_rotation() {
        let o = plane_rotation(6, 0, 3, 0.3)
            * plane_rotation(6, 2, 5, -1.1)
            * plane_rotation(6, 1, 4, 2.0)
            * plane_rotation(6, 0, 5, 0.7);
        let psi = statevector_from_rotation(&o, 3).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-12);
        let expect = &o * vacuum_gamma(3) * o.transpose();
        assert!((covariance_from_state(&psi) - expect).amax() < 1e-12);
    }

    #[test]
    fn reflections_flip_parity() {
        let mut o = DMatrix::identity(4, 4);
        o[(0, 0)] = -1.0;
        let psi = statevector_from_rotation(&o, 2).unwrap();
        let expect = &o * vacuum_gamma(2) * o.transpose();
        assert_eq!(covariance_from_state(&psi), expect);

        let o = plane_rotation(6, 0, 4, 0.9) * &plane_rotation(6, 1, 3, -0.4) * {
            let mut r = DMatrix::identity(6, 6);
            r[(5, 5)] = -1.0;
            r
        };
        let psi = statevector_from_rotation(&o, 3).unwrap();
        let expect = &o * vacuum_gamma(3) * o.transpose();
        assert!((covariance_from_state(&psi) - expect).amax() < 1e-12);
    }

    #[test]
    fn negative_pivots() {
        let mut o = DMatrix::identity(6, 6);
        o[(0, 0)] = -1.0;
        o[(3, 3)] = -1.0;
        let psi = statevector_from_rotation(&o, 3).unwrap();
        assert!(
            (covariance_from_state(&psi) - &o * vacuum_gamma(3) * o.transpose()).amax() < 1e-12
        );
    }

    #[test]
    fn non_orthogonal_rejected() {
        assert!(statevector_from_rotation(&(DMatrix::identity(4, 4) * 2.0), 2).is_err());
    }

    #[test]
    fn vacuum_distribution() {
        let pi = exact_characteristic_distribution(&DenseState::vacuum(3)).unwrap();
        for (idx, &p) in pi.iter().enumerate() {
            let z_type = idx & 0b111 == 0;
            assert_eq!(p, if z_type { 0.125 } else { 0.0 });
        }
    }

    #[test]
    fn majorana_pauli_bijection() {
        let l = 3;
        let mut seen = vec![false; 1 << (2 * l)];
        for i in 0..1u64 << (2 * l) {
            let idx = pauli_index(pauli_of_majorana(&MajoranaString::from_index(i, 2 * l)), l);
            assert!(!seen[idx]);
            seen[idx] = true;
        }
        let parity = pauli_of_majorana(&MajoranaString::ones(2 * l));
        assert_eq!(parity, (0, 0b111));
    }

    #[test]
    fn ladder_operators() {
        let psi = DenseState::vacuum(2).create(1).create(0);
        assert_eq!(psi.amplitudes()[3], Complex64::new(1.0, 0.0));
        // c_1† c_0† = -c_0† c_1†
        let other = DenseState::vacuum(2).create(0).create(1);
        assert_eq!(other.amplitudes()[3], Complex64::new(-1.0, 0.0));
        let (g, _) = correlations_from_state(&psi);
        assert_eq!(g[(0, 0)], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn slater_identity_columns() {
        let v = OrbitalMatrix::first_sites(4, 2).unwrap();
        let psi = statevector_from_orbitals(&v).unwrap();
        assert_eq!(psi.amplitudes()[0b0011], Complex64::new(1.0, 0.0));
        assert!((psi.norm() - 1.0).abs() < 1e-15);
    }
}
