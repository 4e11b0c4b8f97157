//! Covariance-matrix representation of fermionic Gaussian states.
//!
//! Majorana operators follow the Jordan–Wigner convention
//! `γ_{2i-1} = Z_1…Z_{i-1} X_i = c_i + c_i†` and
//! `γ_{2i} = Z_1…Z_{i-1} Y_i = i(c_i† - c_i)` (1-based), and the covariance
//! matrix is `Γ_{μν} = -(i/2) Tr([γ_μ, γ_ν] ρ)`. With this convention the
//! vacuum has `Γ_{2i-1,2i} = +1` and an occupied mode flips the sign of its
//! block. Code indices are 0-based: mode `i` owns rows `2i` and `2i + 1`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, SignedLogDet};
use crate::stats::binary_entropy;

/// Bound on `max |Γ² + 1|` for the pure-state flag.
pub const PURE_TOLERANCE: f64 = 1e-8;
/// Allowed excess of the skew spectrum over one.
pub const SPECTRAL_TOLERANCE: f64 = 1e-8;
/// Residual allowed for orthogonal rotations and orbital isometries.
pub const ISOMETRY_TOLERANCE: f64 = 1e-10;

/// A `2L x 2L` real skew-symmetric covariance matrix.
#[derive(Debug, Clone)]
pub struct CovarianceMatrix {
    gamma: DMatrix<f64>,
    pure: bool,
    /// `ln det(1 + Γ)`
    log_norm: f64,
}

impl CovarianceMatrix {
    /// Validates skew-symmetry and the spectral bound `ν_j ≤ 1`.
    pub fn new(gamma: DMatrix<f64>) -> Result<Self> {
        let n = linalg::check_skew(&gamma)?;
        if n == 0 || n % 2 == 1 {
            return Err(Error::InvalidArgument(format!(
                "covariance matrix needs a positive even dimension, got {n}"
            )));
        }
        let nu = linalg::skew_spectrum(&gamma)?;
        let top = nu.first().copied().unwrap_or(0.0);
        if top > 1.0 + SPECTRAL_TOLERANCE {
            return Err(Error::SpectralBound(top));
        }
        Ok(Self::assemble(gamma))
    }

    /// Builds without the spectral check; the caller guarantees validity.
    fn assemble(mut gamma: DMatrix<f64>) -> Self {
        let n = gamma.nrows();
        for i in 0..n {
            gamma[(i, i)] = 0.0;
            for j in i + 1..n {
                let v = 0.5 * (gamma[(i, j)] - gamma[(j, i)]);
                gamma[(i, j)] = v;
                gamma[(j, i)] = -v;
            }
        }
        let sq = &gamma * &gamma;
        let mut dev = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { -1.0 } else { 0.0 };
                dev = dev.max((sq[(i, j)] - target).abs());
            }
        }
        let shifted = &gamma + DMatrix::<f64>::identity(n, n);
        let mut log_norm = linalg::log_det(&shifted)
            .expect("finite skew matrix")
            .log_abs;
        let pure = dev < PURE_TOLERANCE;
        // det(1 + Γ) = 2^L for pure states; snap away the LU rounding
        let exact = (n / 2) as f64 * std::f64::consts::LN_2;
        if pure && (log_norm - exact).abs() < 1e-10 {
            log_norm = exact;
        }
        CovarianceMatrix {
            gamma,
            pure,
            log_norm,
        }
    }

    /// Vacuum `|0…0⟩`: `Γ₀ = ⊕ [[0, 1], [-1, 0]]`.
    pub fn vacuum(modes: usize) -> Self {
        assert!(modes >= 1, "need at least one mode");
        Self::product_state(&vec![1.0; modes])
    }

    /// Fully occupied state `|1…1⟩ = -Γ₀`.
    pub fn fully_occupied(modes: usize) -> Self {
        assert!(modes >= 1, "need at least one mode");
        Self::product_state(&vec![-1.0; modes])
    }

    /// Product state `⊕ λ_i [[0, 1], [-1, 0]]` with `λ_i = ⟨Z_i⟩ ∈ [-1, 1]`.
    pub fn product_state(lambdas: &[f64]) -> Self {
        let l = lambdas.len();
        let mut g = DMatrix::zeros(2 * l, 2 * l);
        for (i, &lam) in lambdas.iter().enumerate() {
            assert!(lam.abs() <= 1.0, "block value {lam} outside [-1, 1]");
            g[(2 * i, 2 * i + 1)] = lam;
            g[(2 * i + 1, 2 * i)] = -lam;
        }
        Self::assemble(g)
    }

    /// Covariance of the Slater state `∏_n (Σ_i V_in c_i†)|0⟩`.
    pub fn from_orbitals(v: &OrbitalMatrix) -> Self {
        let l = v.modes();
        let vm = v.matrix();
        // ⟨c_i† c_j⟩ = Σ_n conj(V_in) V_jn
        let g = vm.conjugate() * vm.transpose();
        let f = DMatrix::zeros(l, l);
        Self::from_correlations(&g, &f).expect("isometry gives a valid pure state")
    }

    /// Covariance from the two-point functions `G_ij = ⟨c_i† c_j⟩` and
    /// `F_ij = ⟨c_i c_j⟩`.
    ///
    /// With `ĉ_{2i-1} = c_i`, `ĉ_{2i} = c_i†` and `C_{μν} = ⟨ĉ_μ† ĉ_ν⟩`, the
    /// Majoranas are `γ = W ĉ` with per-mode blocks `W_i = [[1, 1], [-i, i]]`
    /// (`√2` times a unitary), and `Γ = -i (W* C Wᵀ - 1)`.
    #[allow(clippy::needless_range_loop)]
    pub fn from_correlations(g: &DMatrix<Complex64>, f: &DMatrix<Complex64>) -> Result<Self> {
        let l = g.nrows();
        if g.ncols() != l || f.nrows() != l || f.ncols() != l {
            return Err(Error::DimensionMismatch {
                expected: l,
                found: f.nrows().max(g.ncols()).max(f.ncols()),
            });
        }
        let one = Complex64::new(1.0, 0.0);
        let iu = Complex64::new(0.0, 1.0);
        let w = [[one, one], [-iu, iu]];
        let wc = [[one, one], [iu, -iu]];
        let mut gamma = DMatrix::zeros(2 * l, 2 * l);
        let mut worst_re = 0.0f64;
        for a in 0..l {
            for b in 0..l {
                let delta = if a == b {
                    one
                } else {
                    Complex64::new(0.0, 0.0)
                };
                let c = [
                    [g[(a, b)], f[(b, a)].conj()],
                    [f[(a, b)], delta - g[(b, a)]],
                ];
                for r in 0..2 {
                    for s in 0..2 {
                        let mut x = Complex64::new(0.0, 0.0);
                        for p in 0..2 {
                            for q in 0..2 {
                                x += wc[r][p] * c[p][q] * w[s][q];
                            }
                        }
                        let (mu, nu) = (2 * a + r, 2 * b + s);
                        if mu == nu {
                            x -= one;
                        }
                        worst_re = worst_re.max(x.re.abs());
                        gamma[(mu, nu)] = x.im;
                    }
                }
            }
        }
        if worst_re > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "correlations do not give a real covariance matrix (imaginary residue {worst_re:.3e})"
            )));
        }
        Self::new(gamma)
    }

    /// Number of modes `L`.
    pub fn modes(&self) -> usize {
        self.gamma.nrows() / 2
    }

    pub fn gamma(&self) -> &DMatrix<f64> {
        &self.gamma
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.gamma
    }

    pub fn is_pure(&self) -> bool {
        self.pure
    }

    /// `ln det(1 + Γ)`, the normalization of the characteristic distribution.
    pub fn log_normalization(&self) -> f64 {
        self.log_norm
    }

    /// `O Γ Oᵀ` for an orthogonal `O`.
    pub fn rotate(&self, o: &DMatrix<f64>) -> Result<Self> {
        let n = self.gamma.nrows();
        if o.nrows() != n || o.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: o.nrows(),
            });
        }
        let res = linalg::orthogonality_residual(o);
        if res > ISOMETRY_TOLERANCE {
            return Err(Error::NotOrthogonal(res));
        }
        Ok(Self::assemble(o * &self.gamma * o.transpose()))
    }

    /// `Tr(ρ γ^x) = i^{|x|/2} Pf[Γ|_x]`, zero for odd `|x|`.
    pub fn wick_expectation(&self, x: &MajoranaString) -> WickValue {
        assert_eq!(x.len(), self.gamma.nrows(), "string length must be 2L");
        let idx = x.support();
        if idx.len() % 2 == 1 {
            return WickValue {
                phase: 0,
                pfaffian: SignedLogDet::ZERO,
            };
        }
        let k = idx.len();
        let mut buf = Vec::with_capacity(k * k);
        for &i in &idx {
            for &j in &idx {
                buf.push(self.gamma[(i, j)]);
            }
        }
        WickValue {
            phase: ((k / 2) % 4) as u8,
            pfaffian: linalg::pfaffian_in_place(&mut buf, k).into(),
        }
    }

    /// `ln π(x) = ln det[Γ|_x] - ln det[1 + Γ]`; `-inf` where `π(x) = 0`.
    pub fn log_characteristic(&self, x: &MajoranaString) -> f64 {
        let w = self.wick_expectation(x);
        if w.is_zero() {
            f64::NEG_INFINITY
        } else {
            2.0 * w.pfaffian.log_abs - self.log_norm
        }
    }

    /// `det(1 + Γ) / 2^L`, which is `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.log_purity().exp()
    }

    pub fn log_purity(&self) -> f64 {
        self.log_norm - self.modes() as f64 * std::f64::consts::LN_2
    }

    /// Von Neumann entropy of the first `l` modes.
    pub fn entanglement_entropy(&self, l: usize) -> Result<f64> {
        if l == 0 || l > self.modes() {
            return Err(Error::InvalidArgument(format!(
                "region size {l} outside 1..={}",
                self.modes()
            )));
        }
        let sub = self.gamma.view((0, 0), (2 * l, 2 * l)).into_owned();
        let nu = linalg::skew_spectrum(&sub)?;
        Ok(nu
            .iter()
            .map(|&v| binary_entropy(0.5 * (1.0 + v.clamp(0.0, 1.0))))
            .sum())
    }

    /// `⟨P⟩` for the parity `P = (-i)^L γ_1 … γ_{2L} = Z_1 … Z_L`, equal to `Pf Γ`.
    pub fn parity_expectation(&self) -> f64 {
        let w = self.wick_expectation(&MajoranaString::ones(self.gamma.nrows()));
        // (-i)^L · i^L = 1
        w.pfaffian.value()
    }

    /// `⟨n_i⟩ = (1 - Γ_{2i,2i+1}) / 2` per mode.
    pub fn occupations(&self) -> Vec<f64> {
        (0..self.modes())
            .map(|i| 0.5 * (1.0 - self.gamma[(2 * i, 2 * i + 1)]))
            .collect()
    }

    /// Total particle number `Σ_i ⟨c_i† c_i⟩`.
    pub fn particle_number(&self) -> f64 {
        self.occupations().iter().sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&CovarianceJson::from(self)).expect("plain numbers serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: CovarianceJson = serde_json::from_str(text)?;
        raw.try_into()
    }
}

/// On-disk form: `{"L": modes, "gamma": [row-major 2L·2L reals]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CovarianceJson {
    #[serde(rename = "L")]
    pub modes: usize,
    pub gamma: Vec<f64>,
}

impl From<&CovarianceMatrix> for CovarianceJson {
    fn from(c: &CovarianceMatrix) -> Self {
        let n = c.gamma.nrows();
        let mut gamma = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                gamma.push(c.gamma[(i, j)]);
            }
        }
        CovarianceJson {
            modes: c.modes(),
            gamma,
        }
    }
}

impl TryFrom<CovarianceJson> for CovarianceMatrix {
    type Error = Error;

    fn try_from(raw: CovarianceJson) -> Result<Self> {
        let n = 2 * raw.modes;
        if raw.gamma.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: raw.gamma.len(),
            });
        }
        CovarianceMatrix::new(DMatrix::from_row_slice(n, n, &raw.gamma))
    }
}

/// `Tr(ρ γ^x)` as `i^phase · Pf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WickValue {
    /// Power of `i`, in `0..4`.
    pub phase: u8,
    pub pfaffian: SignedLogDet,
}

impl WickValue {
    pub fn is_zero(&self) -> bool {
        self.pfaffian.is_zero()
    }

    /// `|Tr(ρ γ^x)|²`.
    pub fn squared(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            (2.0 * self.pfaffian.log_abs).exp()
        }
    }

    pub fn value(&self) -> Complex64 {
        let pf = self.pfaffian.value();
        match self.phase {
            0 => Complex64::new(pf, 0.0),
            1 => Complex64::new(0.0, pf),
            2 => Complex64::new(-pf, 0.0),
            _ => Complex64::new(0.0, -pf),
        }
    }
}

/// A binary string `x ∈ {0,1}^{2L}` selecting the Majorana monomial `γ^x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MajoranaString {
    bits: Vec<bool>,
}

impl MajoranaString {
    pub fn new(bits: Vec<bool>) -> Self {
        MajoranaString { bits }
    }

    pub fn zeros(len: usize) -> Self {
        MajoranaString {
            bits: vec![false; len],
        }
    }

    pub fn ones(len: usize) -> Self {
        MajoranaString {
            bits: vec![true; len],
        }
    }

    /// Bit `μ` is bit `μ` of `index` (little-endian enumeration order).
    pub fn from_index(index: u64, len: usize) -> Self {
        MajoranaString {
            bits: (0..len).map(|mu| (index >> mu) & 1 == 1).collect(),
        }
    }

    pub fn index(&self) -> u64 {
        assert!(
            self.bits.len() <= 64,
            "string too long for an integer index"
        );
        self.bits
            .iter()
            .enumerate()
            .fold(0u64, |acc, (mu, &b)| acc | (u64::from(b) << mu))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// `|x|`
    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Positions of the ones.
    pub fn support(&self) -> Vec<usize> {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.bits.iter().all(|&b| !b)
    }

    pub fn is_parity(&self) -> bool {
        !self.bits.is_empty() && self.bits.iter().all(|&b| b)
    }
}

impl fmt::Display for MajoranaString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for MajoranaString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidArgument(format!(
                    "unexpected character {other:?} in Majorana string"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(MajoranaString::new)
    }
}

/// `L x N` isometry whose columns are the occupied orbitals of a Slater state.
#[derive(Debug, Clone)]
pub struct OrbitalMatrix {
    v: DMatrix<Complex64>,
}

impl OrbitalMatrix {
    pub fn new(v: DMatrix<Complex64>) -> Result<Self> {
        let (l, n) = v.shape();
        if l == 0 || n > l {
            return Err(Error::InvalidArgument(format!(
                "orbital matrix must be L x N with 0 <= N <= L and L >= 1, got {l} x {n}"
            )));
        }
        let gram = v.adjoint() * &v;
        let mut res = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                res = res.max((gram[(i, j)] - target).norm());
            }
        }
        if res > ISOMETRY_TOLERANCE {
            return Err(Error::NotIsometry(res));
        }
        Ok(OrbitalMatrix { v })
    }

    /// The first `n` columns of the identity: sites `0..n` occupied.
    pub fn first_sites(modes: usize, particles: usize) -> Result<Self> {
        Self::new(DMatrix::from_fn(modes, particles, |i, j| {
            Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)
        }))
    }

    pub fn modes(&self) -> usize {
        self.v.nrows()
    }

    pub fn particles(&self) -> usize {
        self.v.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{haar_orthogonal, haar_unitary, skew_spectrum};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_pure(l: usize, seed: u64) -> CovarianceMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        CovarianceMatrix::vacuum(l)
            .rotate(&haar_orthogonal(2 * l, &mut rng))
            .unwrap()
    }

    fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
        (a - b).iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    #[test]
    fn vacuum_blocks() {
        let g1 = CovarianceMatrix::vacuum(1);
        assert_eq!(g1.gamma().as_slice(), &[0.0, -1.0, 1.0, 0.0]); // column-major
        let g3 = CovarianceMatrix::vacuum(3);
        let sq = g3.gamma() * g3.gamma();
        assert_eq!(sq, -DMatrix::<f64>::identity(6, 6));
        assert!(g3.is_pure());
        for l in 1..=8 {
            assert_eq!(CovarianceMatrix::vacuum(l).purity(), 1.0);
        }
    }

    #[test]
    fn mixed_purity() {
        assert!((CovarianceMatrix::product_state(&[0.0, 0.0, 0.0]).purity() - 0.125).abs() < 1e-15);
        let g = CovarianceMatrix::product_state(&[0.5]);
        assert!((g.purity() - 0.625).abs() < 1e-15);
        assert!(!g.is_pure());
    }

    #[test]
    fn rotation_identity_and_spectrum() {
        let g = random_pure(3, 1);
        let same = g.rotate(&DMatrix::identity(6, 6)).unwrap();
        assert!(max_abs_diff(g.gamma(), same.gamma()) < 1e-15);

        let mixed = CovarianceMatrix::product_state(&[0.3, -0.8]);
        let th: f64 = 0.7;
        let mut o = DMatrix::identity(4, 4);
        o[(0, 0)] = th.cos();
        o[(0, 1)] = th.sin();
        o[(1, 0)] = -th.sin();
        o[(1, 1)] = th.cos();
        let rotated = mixed.rotate(&o).unwrap();
        let a = skew_spectrum(mixed.gamma()).unwrap();
        let b = skew_spectrum(rotated.gamma()).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn random_rotation_stays_pure() {
        let g = random_pure(4, 2);
        let sq = g.gamma() * g.gamma();
        assert!(max_abs_diff(&sq, &-DMatrix::<f64>::identity(8, 8)) < 1e-8);
        assert!((g.purity() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn rotate_rejects_bad_input() {
        let g = CovarianceMatrix::vacuum(2);
        assert!(matches!(
            g.rotate(&DMatrix::identity(6, 6)),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            g.rotate(&(DMatrix::identity(4, 4) * 1.1)),
            Err(Error::NotOrthogonal(_))
        ));
    }

    #[test]
    fn orbitals_limits() {
        let empty = OrbitalMatrix::first_sites(4, 0).unwrap();
        assert_eq!(
            CovarianceMatrix::from_orbitals(&empty).gamma(),
            CovarianceMatrix::vacuum(4).gamma()
        );
        let full = OrbitalMatrix::first_sites(3, 3).unwrap();
        assert_eq!(
            CovarianceMatrix::from_orbitals(&full).gamma(),
            CovarianceMatrix::fully_occupied(3).gamma()
        );
        let one = OrbitalMatrix::first_sites(3, 1).unwrap();
        let g = CovarianceMatrix::from_orbitals(&one);
        let expected = CovarianceMatrix::product_state(&[-1.0, 1.0, 1.0]);
        assert_eq!(g.gamma(), expected.gamma());
    }

    #[test]
    fn orbitals_conserve_particle_number() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let u = haar_unitary(6, &mut rng);
        let v = OrbitalMatrix::new(u.columns(0, 2).into_owned()).unwrap();
        let g = CovarianceMatrix::from_orbitals(&v);
        assert!(g.is_pure());
        assert!((g.particle_number() - 2.0).abs() < 1e-10);
        assert!(g.parity_expectation() > 0.0);
    }

    #[test]
    fn non_isometry_rejected() {
        let v = DMatrix::from_element(3, 1, Complex64::new(1.0, 0.0));
        assert!(matches!(OrbitalMatrix::new(v), Err(Error::NotIsometry(_))));
    }

    #[test]
    fn wick_basics() {
        let g = CovarianceMatrix::vacuum(3);
        let id = g.wick_expectation(&MajoranaString::zeros(6));
        assert_eq!(id.value(), Complex64::new(1.0, 0.0));
        let pair: MajoranaString = "110000".parse().unwrap();
        let w = g.wick_expectation(&pair);
        assert_eq!(w.pfaffian, SignedLogDet::ONE);
        // ⟨γ1 γ2⟩ = ⟨X Y⟩ = i⟨Z⟩ = i
        assert_eq!(w.value(), Complex64::new(0.0, 1.0));
        assert!(g.wick_expectation(&"100000".parse().unwrap()).is_zero());
    }

    #[test]
    fn parity_values() {
        assert_eq!(CovarianceMatrix::vacuum(3).parity_expectation(), 1.0);
        assert_eq!(
            CovarianceMatrix::fully_occupied(3).parity_expectation(),
            -1.0
        );
        assert_eq!(
            CovarianceMatrix::fully_occupied(4).parity_expectation(),
            1.0
        );
        for seed in 0..10 {
            let p = random_pure(4, seed).parity_expectation();
            assert!((p * p - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn entanglement_examples() {
        let g = CovarianceMatrix::vacuum(4);
        for l in 1..=4 {
            assert_eq!(g.entanglement_entropy(l).unwrap(), 0.0);
        }
        // pair γ1 with γ3 and γ2 with γ4: swapping Majoranas 2 and 3
        let mut o = DMatrix::zeros(4, 4);
        o[(0, 0)] = 1.0;
        o[(1, 2)] = 1.0;
        o[(2, 1)] = 1.0;
        o[(3, 3)] = 1.0;
        let bell = CovarianceMatrix::vacuum(2).rotate(&o).unwrap();
        let s = bell.entanglement_entropy(1).unwrap();
        assert!((s - std::f64::consts::LN_2).abs() < 1e-14);
        assert!(g.entanglement_entropy(0).is_err());
        assert!(g.entanglement_entropy(5).is_err());
    }

    #[test]
    fn entanglement_complementarity() {
        // reversing the mode order turns the prefix of L - l modes into the complement
        let g = random_pure(6, 4);
        let mut rev = DMatrix::zeros(12, 12);
        for i in 0..6 {
            rev[(2 * i, 2 * (5 - i))] = 1.0;
            rev[(2 * i + 1, 2 * (5 - i) + 1)] = 1.0;
        }
        let flipped = g.rotate(&rev).unwrap();
        for l in 1..6 {
            let a = g.entanglement_entropy(l).unwrap();
            let b = flipped.entanglement_entropy(6 - l).unwrap();
            assert!((a - b).abs() < 1e-8, "l={l}: {a} vs {b}");
        }
    }

    #[test]
    fn json_round_trip_and_validation() {
        let g = random_pure(3, 5);
        let back = CovarianceMatrix::from_json(&g.to_json()).unwrap();
        assert_eq!(back.gamma(), g.gamma());
        let not_skew = r#"{"L": 1, "gamma": [0.0, 1.0, 1.0, 0.0]}"#;
        assert!(CovarianceMatrix::from_json(not_skew).is_err());
        let too_big = r#"{"L": 1, "gamma": [0.0, 2.0, -2.0, 0.0]}"#;
        assert!(matches!(
            CovarianceMatrix::from_json(too_big),
            Err(Error::SpectralBound(_))
        ));
        let wrong_len = r#"{"L": 2, "gamma": [0.0, 1.0, -1.0, 0.0]}"#;
        assert!(CovarianceMatrix::from_json(wrong_len).is_err());
    }

    #[test]
    fn string_parsing() {
        let x: MajoranaString = "0110".parse().unwrap();
        assert_eq!(x.weight(), 2);
        assert_eq!(x.support(), vec![1, 2]);
        assert_eq!(x.to_string(), "0110");
        assert_eq!(MajoranaString::from_index(x.index(), 4), x);
        assert!("01a".parse::<MajoranaString>().is_err());
    }
}
