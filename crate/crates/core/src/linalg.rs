//! Eigenvalue computations.
//!
//! The sampler-facing routine is [`tridiagonal_eigenvalues`]: an
//! implicit-shift QL iteration for symmetric tridiagonal matrices,
//! eigenvalues only, O(n^2). Dense symmetric / Hermitian spectra (used by
//! the matrix-model oracles) go through nalgebra so the two sampling
//! routes do not share a reduction kernel.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Error, Result};

/// All eigenvalues of the symmetric tridiagonal matrix with diagonal `d`
/// and off-diagonal `e` (`e.len() == d.len() - 1`), sorted ascending.
///
/// Implicit-shift QL with deflation; iteration is capped, and hitting the
/// cap reports the stuck block.
pub fn tridiagonal_eigenvalues(d: &[f64], e: &[f64]) -> Result<Vec<f64>> {
    let n = d.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if e.len() + 1 != n {
        return Err(Error::Range(format!(
            "tridiagonal off-diagonal length {} does not match size {}",
            e.len(),
            n
        )));
    }
    let mut d = d.to_vec();
    // Working off-diagonal, padded so e[m] is addressable for m = n-1.
    let mut e: Vec<f64> = e.iter().copied().chain(std::iter::once(0.0)).collect();

    for l in 0..n {
        let mut iter = 0usize;
        loop {
            // Look for a negligible off-diagonal element to split at.
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 64 {
                return Err(Error::Numerical(format!(
                    "QL failed to converge for eigenvalue {l} (block {l}..{m}, off-diag {:.3e})",
                    e[l]
                )));
            }
            // Wilkinson-style shift from the 2x2 at the split point.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // Rotation annihilated early; deflate and restart.
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                f = (d[i] - g) * s + 2.0 * c * b;
                p = s * f;
                d[i + 1] = g + p;
                g = c * f - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Eigenvalues of a dense real symmetric matrix, sorted ascending.
pub fn dense_symmetric_eigenvalues(a: &DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = a.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Eigenvalues of a dense complex Hermitian matrix, sorted ascending.
pub fn dense_hermitian_eigenvalues(a: &DMatrix<Complex<f64>>) -> Vec<f64> {
    let mut ev: Vec<f64> = a.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn ql_solves_known_2x2() {
        // [[2, 1], [1, 2]] has eigenvalues 1 and 3.
        let ev = tridiagonal_eigenvalues(&[2.0, 2.0], &[1.0]).unwrap();
        assert_abs_diff_eq!(ev[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ev[1], 3.0, epsilon = 1e-14);
    }

    #[test]
    fn ql_solves_laplacian() {
        // Discrete Laplacian: eigenvalues 2 - 2 cos(k pi / (n+1)).
        let n = 25;
        let d = vec![2.0; n];
        let e = vec![-1.0; n - 1];
        let ev = tridiagonal_eigenvalues(&d, &e).unwrap();
        for (k, v) in ev.iter().enumerate() {
            let expected =
                2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos();
            assert_abs_diff_eq!(*v, expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn ql_handles_zero_offdiagonals() {
        let ev = tridiagonal_eigenvalues(&[3.0, -1.0, 5.0], &[0.0, 0.0]).unwrap();
        assert_eq!(ev, vec![-1.0, 3.0, 5.0]);
        let single = tridiagonal_eigenvalues(&[4.0], &[]).unwrap();
        assert_eq!(single, vec![4.0]);
    }

    #[test]
    fn ql_matches_dense_solver() {
        // Cross-check the hand-written QL against nalgebra on random input.
        let mut rng = crate::rng::RngStream::new(11, 0);
        for n in [3usize, 8, 40] {
            let d: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
            let e: Vec<f64> = (0..n - 1).map(|_| rng.normal().abs() + 0.1).collect();
            let mine = tridiagonal_eigenvalues(&d, &e).unwrap();
            let mut dense = DMatrix::zeros(n, n);
            for i in 0..n {
                dense[(i, i)] = d[i];
                if i + 1 < n {
                    dense[(i, i + 1)] = e[i];
                    dense[(i + 1, i)] = e[i];
                }
            }
            let reference = dense_symmetric_eigenvalues(&dense);
            let scale: f64 = mine.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            for (a, b) in mine.iter().zip(reference.iter()) {
                assert!((a - b).abs() <= 1e-12 * scale, "n={n}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn hermitian_eigenvalues_of_pauli_like_matrix() {
        // [[1, i], [-i, 1]] has eigenvalues 0 and 2.
        let i = Complex::new(0.0, 1.0);
        let a = DMatrix::from_row_slice(2, 2, &[
            Complex::new(1.0, 0.0),
            i,
            -i,
            Complex::new(1.0, 0.0),
        ]);
        let ev = dense_hermitian_eigenvalues(&a);
        assert_abs_diff_eq!(ev[0], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ev[1], 2.0, epsilon = 1e-14);
    }
}
