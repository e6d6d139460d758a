//! Column-pivoted Householder QR for linear solves and the spectral condition
//! number via the Gram matrix.

use alloc::vec::Vec;
use num_complex::Complex64 as C64;
use num_traits::{Float, Zero};

use super::{hermitian_eigenvalues, CMatrix, LinalgError, LinalgResult};

/// Solve `A X = B` for square `A` through a column-pivoted Householder QR
/// factorization `A P = Q R`.
pub fn solve_qr_colpivot(a: &CMatrix, b: &CMatrix) -> LinalgResult<CMatrix> {
    let n = a.rows();
    if !a.is_square() || b.rows() != n {
        return Err(LinalgError::DimensionMismatch(a.rows(), a.cols(), b.rows(), b.cols()));
    }
    let nrhs = b.cols();
    let mut r = a.clone();
    let mut qtb = b.clone();
    let mut perm: Vec<usize> = (0..n).collect();

    for k in 0..n {
        // pivot on the column with the largest remaining norm
        let mut best = k;
        let mut best_norm = -1.0f64;
        for j in k..n {
            let nj: f64 = (k..n).map(|i| r[(i, j)].norm_sqr()).sum();
            if nj > best_norm {
                best_norm = nj;
                best = j;
            }
        }
        if best != k {
            for i in 0..n {
                let t = r[(i, k)];
                r[(i, k)] = r[(i, best)];
                r[(i, best)] = t;
            }
            perm.swap(k, best);
        }

        let xnorm = best_norm.sqrt();
        if xnorm == 0.0 {
            return Err(LinalgError::Singular(0.0));
        }
        let x0 = r[(k, k)];
        let phase = if x0.is_zero() { C64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * xnorm;
        let mut u: Vec<C64> = (k..n).map(|i| r[(i, k)]).collect();
        u[0] -= alpha;
        let unorm = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if unorm > 0.0 {
            for z in u.iter_mut() {
                *z /= unorm;
            }
            // apply H = I - 2uu† to the trailing columns of R and to Q†B
            for j in k..n {
                let dot: C64 = (k..n).map(|i| u[i - k].conj() * r[(i, j)]).sum();
                for i in k..n {
                    let delta = 2.0 * dot * u[i - k];
                    r[(i, j)] -= delta;
                }
            }
            for j in 0..nrhs {
                let dot: C64 = (k..n).map(|i| u[i - k].conj() * qtb[(i, j)]).sum();
                for i in k..n {
                    let delta = 2.0 * dot * u[i - k];
                    qtb[(i, j)] -= delta;
                }
            }
        }
        r[(k, k)] = alpha;
        for i in k + 1..n {
            r[(i, k)] = C64::zero();
        }
    }

    // rank check on the pivoted diagonal
    let r00 = r[(0, 0)].norm();
    let rnn = r[(n - 1, n - 1)].norm();
    if rnn <= f64::EPSILON * r00 * n as f64 {
        return Err(LinalgError::Singular(rnn / r00.max(f64::MIN_POSITIVE)));
    }

    // back-substitution, then undo the permutation
    let mut y = CMatrix::zeros(n, nrhs);
    for j in 0..nrhs {
        for i in (0..n).rev() {
            let mut acc = qtb[(i, j)];
            for l in i + 1..n {
                acc -= r[(i, l)] * y[(l, j)];
            }
            y[(i, j)] = acc / r[(i, i)];
        }
    }
    let mut x = CMatrix::zeros(n, nrhs);
    for (k, &p) in perm.iter().enumerate() {
        for j in 0..nrhs {
            x[(p, j)] = y[(k, j)];
        }
    }
    Ok(x)
}

/// Spectral (2-norm) condition number of a square matrix, computed from the
/// eigenvalues of `A†A`.
pub fn condition_number(a: &CMatrix) -> LinalgResult<f64> {
    let gram = a.dagger().matmul(a);
    let eigs = hermitian_eigenvalues(&gram.hermitized())?;
    let max = eigs.last().copied().unwrap_or(0.0).max(0.0);
    let min = eigs.first().copied().unwrap_or(0.0).max(0.0);
    if min <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((max / min).sqrt())
}
