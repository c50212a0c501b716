//! Small numeric helpers shared across modules.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `i^k` for `k` taken mod 4.
#[inline]
pub(crate) fn i_pow(k: u8) -> Complex64 {
    match k % 4 {
        0 => c(1.0, 0.0),
        1 => c(0.0, 1.0),
        2 => c(-1.0, 0.0),
        _ => c(0.0, -1.0),
    }
}

#[inline]
pub(crate) fn powi(x: f64, k: usize) -> f64 {
    let mut acc = 1.0;
    let mut base = x;
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

/// Row-major square matrix product.
#[cfg(test)]
pub(crate) fn dense_matmul(a: &[Complex64], b: &[Complex64], dim: usize) -> Vec<Complex64> {
    let mut out = vec![c(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for k in 0..dim {
            let aik = a[i * dim + k];
            if aik == c(0.0, 0.0) {
                continue;
            }
            for j in 0..dim {
                out[i * dim + j] += aik * b[k * dim + j];
            }
        }
    }
    out
}

/// Row-major Kronecker product `a ⊗ b` of square matrices.
pub(crate) fn kron(a: &[Complex64], da: usize, b: &[Complex64], db: usize) -> Vec<Complex64> {
    let d = da * db;
    let mut out = vec![c(0.0, 0.0); d * d];
    for i in 0..da {
        for j in 0..da {
            let aij = a[i * da + j];
            if aij == c(0.0, 0.0) {
                continue;
            }
            for k in 0..db {
                for l in 0..db {
                    out[(i * db + k) * d + j * db + l] = aij * b[k * db + l];
                }
            }
        }
    }
    out
}

/// Eigenvalues of a row-major Hermitian matrix, sorted nonincreasing.
pub(crate) fn hermitian_eigenvalues(data: &[Complex64], dim: usize) -> Vec<f64> {
    let m = nalgebra::DMatrix::from_row_slice(dim, dim, data);
    let eig = nalgebra::linalg::SymmetricEigen::new(m);
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| b.partial_cmp(a).unwrap_or(core::cmp::Ordering::Equal));
    vals
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|&x| libm::log(x)).collect();
    let ly: Vec<f64> = ys.iter().map(|&y| libm::log(y)).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in lx.iter().zip(&ly) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}
