use nalgebra::{DMatrix, SymmetricEigen};

use super::pfaffian::check_skew;
use crate::error::{Error, Result};

/// The values `ν_j ≥ 0` such that the eigenvalues of the real skew-symmetric
/// matrix `a` (dimension `2m`) are `±iν_j`, sorted in decreasing order.
///
/// `a` is reduced to skew tridiagonal form by Householder reflections. A skew
/// tridiagonal matrix with superdiagonal `e` is diagonally similar to `i T`
/// with `T` the symmetric tridiagonal matrix carrying the same `e` and a zero
/// diagonal, so the `ν_j` are the nonnegative half of the spectrum of `T`.
pub fn skew_spectrum(a: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = check_skew(a)?;
    if n % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "skew spectrum needs an even dimension, got {n}"
        )));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let off = skew_tridiagonalize(a);
    let t = DMatrix::from_fn(n, n, |i, j| {
        if j == i + 1 {
            off[i]
        } else if i == j + 1 {
            off[j]
        } else {
            0.0
        }
    });
    let mut eig: Vec<f64> = SymmetricEigen::new(t).eigenvalues.iter().copied().collect();
    eig.sort_by(|x, y| y.total_cmp(x));
    Ok(eig[..n / 2].iter().map(|v| v.max(0.0)).collect())
}

/// Superdiagonal of the skew tridiagonal form `Qᵀ A Q`.
fn skew_tridiagonalize(a: &DMatrix<f64>) -> Vec<f64> {
    let n = a.nrows();
    // antisymmetrize to clean roundoff, work row-major
    let mut w = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            w[i * n + j] = 0.5 * (a[(i, j)] - a[(j, i)]);
        }
    }
    let mut off = vec![0.0; n.saturating_sub(1)];
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    for k in 0..n.saturating_sub(1) {
        let start = k + 1;
        // x = A[k+1.., k]
        let norm = (start..n).map(|i| w[i * n + k].powi(2)).sum::<f64>().sqrt();
        if norm == 0.0 {
            off[k] = 0.0;
            continue;
        }
        let x0 = w[start * n + k];
        let alpha = if x0 > 0.0 { -norm } else { norm };
        for i in start..n {
            v[i] = w[i * n + k];
        }
        v[start] -= alpha;
        let vnorm2: f64 = (start..n).map(|i| v[i] * v[i]).sum();
        off[k] = -alpha; // superdiagonal entry A[k, k+1] = -(Hx)_0
        if vnorm2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm2;
        // p = beta * A v on the trailing block
        for i in start..n {
            let row = &w[i * n + start..i * n + n];
            p[i] = beta
                * row
                    .iter()
                    .zip(&v[start..n])
                    .map(|(x, y)| x * y)
                    .sum::<f64>();
        }
        // A <- A + v pᵀ - p vᵀ (trailing block)
        for i in start..n {
            let (vi, pi) = (v[i], p[i]);
            let row = &mut w[i * n + start..i * n + n];
            for ((x, &pj), &vj) in row.iter_mut().zip(&p[start..n]).zip(&v[start..n]) {
                *x += vi * pj - pi * vj;
            }
        }
        for i in start..n {
            w[i * n + k] = 0.0;
            w[k * n + i] = 0.0;
        }
        w[start * n + k] = alpha;
        w[k * n + start] = -alpha;
    }
    off
}
