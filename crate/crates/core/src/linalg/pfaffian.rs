use nalgebra::DMatrix;

use super::lu::{row_major, singular_threshold, square_dim, SignedLogDet};
use super::scaled::Scaled;
use crate::error::{Error, Result};

/// Absolute tolerance on `max |A + Aᵀ|` for a matrix to count as skew-symmetric.
pub const SKEW_TOLERANCE: f64 = 1e-10;

/// Largest absolute entry of `A + Aᵀ`.
pub fn max_asymmetry(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((a[(i, j)] + a[(j, i)]).abs());
        }
    }
    worst
}

pub(crate) fn check_skew(a: &DMatrix<f64>) -> Result<usize> {
    let n = square_dim(a.nrows(), a.ncols())?;
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let asym = max_asymmetry(a);
    if asym > SKEW_TOLERANCE {
        return Err(Error::NotSkewSymmetric(asym));
    }
    Ok(n)
}

/// Pfaffian of a real skew-symmetric matrix in sign/log form.
///
/// Uses Parlett–Reid tridiagonalization with partial pivoting. Odd
/// dimensions give an exact zero, the empty matrix gives one.
pub fn pfaffian(a: &DMatrix<f64>) -> Result<SignedLogDet> {
    let n = check_skew(a)?;
    let mut buf = row_major(a);
    Ok(pfaffian_in_place(&mut buf, n).into())
}

/// Parlett–Reid on a row-major skew-symmetric buffer (overwritten).
///
/// Only the strict upper and lower parts are read; the diagonal is ignored.
pub fn pfaffian_in_place(a: &mut [f64], n: usize) -> Scaled {
    debug_assert_eq!(a.len(), n * n);
    if n % 2 == 1 {
        return Scaled::ZERO;
    }
    if n == 0 {
        return Scaled::ONE;
    }
    let max_abs = a.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if max_abs == 0.0 {
        return Scaled::ZERO;
    }
    let tiny = singular_threshold(n, max_abs);
    let mut pf = Scaled::ONE;
    let mut tau = vec![0.0; n];
    let mut col = vec![0.0; n];
    for k in (0..n - 1).step_by(2) {
        // pivot: largest entry in column k below the diagonal
        let mut kp = k + 1;
        let mut best = a[(k + 1) * n + k].abs();
        for i in k + 2..n {
            let v = a[i * n + k].abs();
            if v > best {
                best = v;
                kp = i;
            }
        }
        if kp != k + 1 {
            for j in 0..n {
                a.swap((k + 1) * n + j, kp * n + j);
            }
            for i in 0..n {
                a.swap(i * n + k + 1, i * n + kp);
            }
            pf = pf.negate();
        }
        if best <= tiny {
            return Scaled::ZERO;
        }
        let head = a[k * n + k + 1];
        pf = pf * Scaled::from_f64(head);
        if k + 2 < n {
            for j in k + 2..n {
                tau[j] = a[k * n + j] / head;
                col[j] = a[j * n + k + 1];
            }
            // A[k+2:, k+2:] += tau ⊗ col - col ⊗ tau
            for i in k + 2..n {
                let (ti, ci) = (tau[i], col[i]);
                let row = &mut a[i * n + k + 2..i * n + n];
                for ((x, &cj), &tj) in row.iter_mut().zip(&col[k + 2..]).zip(&tau[k + 2..]) {
                    *x += ti * cj - ci * tj;
                }
            }
        }
    }
    pf
}
