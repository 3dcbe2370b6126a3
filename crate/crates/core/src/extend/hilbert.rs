//! Extension through the orthogonal projection in Euclidean space.

use crate::error::{Error, Result};
use crate::matrix::{rank, Mat};
use crate::rational::to_f64;

const SPECTRAL_TOL: f64 = 1e-9;

/// `S = T ∘ P` with `P` the orthogonal projection of `ℝⁿ` onto `span(basis)`.
///
/// `t` is `d×d` in basis coordinates. `S` is exact; the equality of the
/// Euclidean operator norms of `S` and `T` is checked in floating point.
pub fn hilbert_extension(basis: &Mat, t: &Mat, n: usize) -> Result<Mat> {
    let d = basis.cols();
    if basis.rows() != n {
        return Err(Error::dims("basis rows", n, basis.rows()));
    }
    if t.rows() != d || t.cols() != d {
        return Err(Error::input(format!("operator must be {d}x{d} in basis coordinates")));
    }
    if d == 0 || rank(basis) != d {
        return Err(Error::input("subspace basis is not of full column rank"));
    }
    let bt = basis.transpose();
    let gram_inv = bt.mul(basis)?.inverse()?;
    let image = basis.mul(t)?;
    let s = image.mul(&gram_inv)?.mul(&bt)?;
    if s.mul(basis)? != image {
        return Err(Error::internal("projection extension does not extend T"));
    }

    // ‖T‖₂ is the norm of B T R⁻¹ where B = Q R is a thin QR factorisation.
    let b = to_f64_rows(basis);
    let r_inv = upper_inverse(&gram_schmidt_r(&b, d));
    let bt_f = to_f64_rows(&image);
    let scaled: Vec<Vec<f64>> = bt_f
        .iter()
        .map(|row| (0..d).map(|j| (0..d).map(|k| row[k] * r_inv[k][j]).sum()).collect())
        .collect();
    let t_norm = spectral_norm(&scaled);
    let s_norm = spectral_norm(&to_f64_rows(&s));
    if (t_norm - s_norm).abs() > SPECTRAL_TOL * t_norm.max(1.0) {
        return Err(Error::internal(format!("‖S‖₂ = {s_norm} differs from ‖T‖₂ = {t_norm}")));
    }
    Ok(s)
}

fn to_f64_rows(m: &Mat) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(to_f64).collect()).collect()
}

/// `R` of the modified Gram–Schmidt factorisation of the columns of `b`.
fn gram_schmidt_r(b: &[Vec<f64>], d: usize) -> Vec<Vec<f64>> {
    let n = b.len();
    let mut q: Vec<Vec<f64>> = (0..d).map(|j| (0..n).map(|i| b[i][j]).collect()).collect();
    let mut r = vec![vec![0.0; d]; d];
    for j in 0..d {
        for k in 0..j {
            let proj: f64 = (0..n).map(|i| q[k][i] * q[j][i]).sum();
            r[k][j] += proj;
            for i in 0..n {
                q[j][i] -= proj * q[k][i];
            }
        }
        let norm = q[j].iter().map(|x| x * x).sum::<f64>().sqrt();
        r[j][j] = norm;
        for x in q[j].iter_mut() {
            *x /= norm;
        }
    }
    r
}

fn upper_inverse(r: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let d = r.len();
    let mut inv = vec![vec![0.0; d]; d];
    for j in 0..d {
        inv[j][j] = 1.0 / r[j][j];
        for i in (0..j).rev() {
            let s: f64 = (i + 1..=j).map(|k| r[i][k] * inv[k][j]).sum();
            inv[i][j] = -s / r[i][i];
        }
    }
    inv
}

/// Largest singular value of a row-major matrix, by power iteration on `AᵀA`
/// with a Rayleigh-quotient estimate.
pub fn spectral_norm(a: &[Vec<f64>]) -> f64 {
    let cols = a.first().map_or(0, Vec::len);
    if cols == 0 {
        return 0.0;
    }
    let gram: Vec<Vec<f64>> = (0..cols)
        .map(|i| (0..cols).map(|j| a.iter().map(|row| row[i] * row[j]).sum()).collect())
        .collect();
    // a fixed, generic start vector avoids starting orthogonal to the top
    // eigenvector in all but degenerate cases
    let mut x: Vec<f64> = (0..cols).map(|i| 1.0 + 0.1 * (i as f64 + 1.0).sqrt()).collect();
    let mut lambda = 0.0;
    for _ in 0..100_000 {
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        x.iter_mut().for_each(|v| *v /= norm);
        let y: Vec<f64> = gram.iter().map(|row| row.iter().zip(&x).map(|(g, v)| g * v).sum()).collect();
        let next: f64 = y.iter().zip(&x).map(|(a, b)| a * b).sum();
        x = y;
        if (next - lambda).abs() <= 1e-15 * next.abs().max(1.0) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    lambda.max(0.0).sqrt()
}
