use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex64;

use super::scaled::Scaled;
use crate::error::{Error, Result};

/// Determinant (or Pfaffian) carried as a sign and the log of its magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLogDet {
    /// One of `-1`, `0`, `+1`.
    pub sign: i8,
    /// `ln |det|`; meaningless (set to `-inf`) when `sign == 0`.
    pub log_abs: f64,
}

impl SignedLogDet {
    pub const ZERO: SignedLogDet = SignedLogDet {
        sign: 0,
        log_abs: f64::NEG_INFINITY,
    };
    pub const ONE: SignedLogDet = SignedLogDet {
        sign: 1,
        log_abs: 0.0,
    };

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Linear value `sign * exp(log_abs)`.
    pub fn value(&self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            f64::from(self.sign) * self.log_abs.exp()
        }
    }
}

impl From<Scaled> for SignedLogDet {
    fn from(s: Scaled) -> Self {
        if s.is_zero() {
            SignedLogDet::ZERO
        } else {
            SignedLogDet {
                sign: s.sign(),
                log_abs: s.ln_abs(),
            }
        }
    }
}

/// Relative pivot threshold below which a matrix is treated as exactly singular.
pub(crate) fn singular_threshold(n: usize, max_abs: f64) -> f64 {
    (n.max(1) as f64) * f64::EPSILON * max_abs
}

/// Sign and log-magnitude of `det(m)` via LU with partial pivoting.
pub fn log_det(m: &DMatrix<f64>) -> Result<SignedLogDet> {
    let n = square_dim(m.nrows(), m.ncols())?;
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let mut buf = row_major(m);
    Ok(det_in_place(&mut buf, n).into())
}

/// `ln |det(m)|` for a complex matrix, or `None` when `m` is singular.
pub fn log_abs_det_complex(m: &DMatrix<Complex64>) -> Result<Option<f64>> {
    let n = square_dim(m.nrows(), m.ncols())?;
    if m.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let mut buf = row_major(m);
    Ok(lu_in_place(&mut buf, n).map(|(log_abs, _)| log_abs))
}

/// Determinant of the row-major `n x n` matrix in `a` (overwritten) in scaled form.
///
/// An empty matrix has determinant one.
pub fn det_in_place(a: &mut [f64], n: usize) -> Scaled {
    debug_assert_eq!(a.len(), n * n);
    if n == 0 {
        return Scaled::ONE;
    }
    let max_abs = a.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if max_abs == 0.0 {
        return Scaled::ZERO;
    }
    let tiny = singular_threshold(n, max_abs);
    let mut det = Scaled::ONE;
    for k in 0..n {
        let mut p = k;
        let mut best = a[k * n + k].abs();
        for i in k + 1..n {
            let v = a[i * n + k].abs();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best <= tiny {
            return Scaled::ZERO;
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            det = det.negate();
        }
        let pivot = a[k * n + k];
        det = det * Scaled::from_f64(pivot);
        let (upper, lower) = a.split_at_mut((k + 1) * n);
        let row_k = &upper[k * n + k + 1..k * n + n];
        for i in 0..n - k - 1 {
            let row_i = &mut lower[i * n + k..i * n + n];
            let l = row_i[0] / pivot;
            if l != 0.0 {
                for (x, &u) in row_i[1..].iter_mut().zip(row_k) {
                    *x -= l * u;
                }
            }
        }
    }
    det
}

/// Generic LU returning `(ln |det|, phase)`; `None` if singular.
fn lu_in_place<T>(a: &mut [T], n: usize) -> Option<(f64, T)>
where
    T: ComplexField<RealField = f64> + Copy,
{
    if n == 0 {
        return Some((0.0, T::one()));
    }
    let max_abs = a.iter().fold(0.0f64, |acc, v| acc.max(v.modulus()));
    if max_abs == 0.0 {
        return None;
    }
    let tiny = singular_threshold(n, max_abs);
    let mut log_abs = 0.0;
    let mut phase = T::one();
    for k in 0..n {
        let mut p = k;
        let mut best = a[k * n + k].modulus();
        for i in k + 1..n {
            let v = a[i * n + k].modulus();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best <= tiny {
            return None;
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            phase = -phase;
        }
        let pivot = a[k * n + k];
        log_abs += best.ln();
        phase *= pivot.unscale(best);
        for i in k + 1..n {
            let l = a[i * n + k] / pivot;
            for j in k + 1..n {
                let u = a[k * n + j];
                a[i * n + j] -= l * u;
            }
        }
    }
    Some((log_abs, phase))
}

pub(crate) fn square_dim(rows: usize, cols: usize) -> Result<usize> {
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    Ok(rows)
}

pub(crate) fn row_major<T: nalgebra::Scalar + Copy>(m: &DMatrix<T>) -> Vec<T> {
    let (r, c) = m.shape();
    let mut out = Vec::with_capacity(r * c);
    for i in 0..r {
        for j in 0..c {
            out.push(m[(i, j)]);
        }
    }
    out
}
