//! Hermitian eigendecomposition: Householder reduction to real symmetric
//! tridiagonal form followed by implicit-shift QL iteration. Eigenvalues-only
//! and eigenvector-accumulating variants are provided separately since the
//! vector accumulation triples the cost and most callers only need spectra.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64 as C64;
use num_traits::{Float, Zero};

use super::{CMatrix, LinalgError, LinalgResult};

const MAX_QL_ITERS: usize = 60;

/// Eigenvalues of a Hermitian matrix, ascending. The input is hermitized
/// implicitly (only the lower triangle is read).
pub fn hermitian_eigenvalues(a: &CMatrix) -> LinalgResult<Vec<f64>> {
    let (mut d, mut e, _) = tridiagonalize(a, false);
    ql_implicit(&mut d, &mut e, None)?;
    d.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(d)
}

/// Full eigendecomposition of a Hermitian matrix. Returns `(values, vectors)`
/// with values ascending and the k-th column of `vectors` the corresponding
/// unit eigenvector: `A = V diag(values) V†`.
pub fn hermitian_eigen(a: &CMatrix) -> LinalgResult<(Vec<f64>, CMatrix)> {
    let (mut d, mut e, q) = tridiagonalize(a, true);
    let mut z = q.expect("tracking requested");
    ql_implicit(&mut d, &mut e, Some(&mut z))?;
    // sort ascending, permuting columns alongside
    let n = d.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let vecs = CMatrix::from_fn(n, n, |r, c| z[(r, order[c])]);
    Ok((vals, vecs))
}

/// Numeric rank: eigenvalue magnitudes above `rel_tol` times the largest.
pub fn numeric_rank(eigenvalues: &[f64], rel_tol: f64) -> usize {
    let scale = eigenvalues.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    if scale == 0.0 {
        return 0;
    }
    eigenvalues.iter().filter(|&&x| x.abs() > rel_tol * scale).count()
}

/// Unitary reduction `A = Q T Q†` with `T` real symmetric tridiagonal.
/// Returns the diagonal, the subdiagonal, and `Q` when `track_q` is set.
fn tridiagonalize(a: &CMatrix, track_q: bool) -> (Vec<f64>, Vec<f64>, Option<CMatrix>) {
    let n = a.rows();
    debug_assert!(a.is_square());
    let mut m = a.clone();
    // Householder vectors, one per eliminated column.
    let mut hh: Vec<Option<Vec<C64>>> = Vec::with_capacity(n.saturating_sub(2));

    for k in 0..n.saturating_sub(2) {
        let len = n - k - 1;
        let mut x: Vec<C64> = (0..len).map(|i| m[(k + 1 + i, k)]).collect();
        let xnorm = l2_norm(&x);
        if xnorm == 0.0 {
            hh.push(None);
            continue;
        }
        // reflect x onto a multiple of e1, phase chosen to avoid cancellation
        let phase = if x[0].is_zero() { C64::new(1.0, 0.0) } else { x[0] / x[0].norm() };
        let alpha = -phase * xnorm;
        x[0] -= alpha;
        let vnorm = l2_norm(&x);
        if vnorm < f64::EPSILON * xnorm {
            hh.push(None);
            continue;
        }
        for v in x.iter_mut() {
            *v /= vnorm;
        }
        // rank-2 update of the trailing block: A' = A - 2uw† - 2wu†, w = Au - (u†Au)u
        let u = x;
        let mut y = vec![C64::zero(); len];
        for r in 0..len {
            let row = &m.row(k + 1 + r)[k + 1..];
            let mut acc = C64::zero();
            for (uc, ac) in u.iter().zip(row) {
                acc += ac * uc;
            }
            y[r] = acc;
        }
        let c: f64 = u.iter().zip(&y).map(|(ui, yi)| (ui.conj() * yi).re).sum();
        let w: Vec<C64> = y.iter().zip(&u).map(|(yi, ui)| yi - c * ui).collect();
        for r in 0..len {
            let ur = u[r];
            let wr = w[r];
            let row = &mut m.row_mut(k + 1 + r)[k + 1..];
            for ((mc, uc), wc) in row.iter_mut().zip(&u).zip(&w) {
                *mc -= 2.0 * (ur * wc.conj() + wr * uc.conj());
            }
        }
        // eliminated column
        m[(k + 1, k)] = alpha;
        m[(k, k + 1)] = alpha.conj();
        for r in k + 2..n {
            m[(r, k)] = C64::zero();
            m[(k, r)] = C64::zero();
        }
        hh.push(Some(u));
    }

    // make the subdiagonal real non-negative with a diagonal phase similarity
    let mut d: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    let mut e = vec![0.0f64; n.saturating_sub(1)];
    let mut phases = vec![C64::new(1.0, 0.0); n];
    for k in 0..n.saturating_sub(1) {
        let f = m[(k + 1, k)];
        let mag = f.norm();
        e[k] = mag;
        let ph = if mag == 0.0 { C64::new(1.0, 0.0) } else { f / mag };
        phases[k + 1] = phases[k] * ph;
    }
    let _ = &mut d;

    let q = if track_q {
        let mut q = CMatrix::identity(n);
        // Q = H_0 H_1 ... ; apply reflectors to the identity from the right side
        for (k, h) in hh.iter().enumerate() {
            if let Some(u) = h {
                let len = n - k - 1;
                for r in 0..n {
                    let row = &mut q.row_mut(r)[k + 1..];
                    let mut acc = C64::zero();
                    for (qc, uc) in row.iter().zip(u) {
                        acc += qc * uc;
                    }
                    debug_assert_eq!(row.len(), len);
                    for (qc, uc) in row.iter_mut().zip(u) {
                        *qc -= 2.0 * acc * uc.conj();
                    }
                }
            }
        }
        // absorb phases: column j scaled by phases[j]
        for r in 0..n {
            for (j, ph) in phases.iter().enumerate() {
                q[(r, j)] *= ph;
            }
        }
        Some(q)
    } else {
        None
    };

    (d, e, q)
}

/// Implicit-shift QL on a real symmetric tridiagonal matrix, optionally
/// accumulating the rotations into the complex columns of `z`.
fn ql_implicit(d: &mut [f64], e: &mut Vec<f64>, mut z: Option<&mut CMatrix>) -> LinalgResult<()> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    e.push(0.0); // sentinel

    // Off-diagonals are negligible relative to their neighbors or, for
    // noise-scale clusters of a rank-deficient matrix, relative to the
    // largest row scale seen so far; without the absolute floor the zero
    // cluster of a low-rank matrix never deflates.
    let mut tst1 = 0.0f64;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut iters = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m].abs() <= f64::EPSILON * tst1 {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iters += 1;
            if iters > MAX_QL_ITERS {
                return Err(LinalgError::NoConvergence);
            }
            // Wilkinson shift
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + copysign(r, g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(zm) = z.as_deref_mut() {
                    for k in 0..zm.rows() {
                        f = zm[(k, i + 1)].re;
                        let fi = zm[(k, i + 1)].im;
                        let zi = zm[(k, i)];
                        zm[(k, i + 1)] = C64::new(s * zi.re + c * f, s * zi.im + c * fi);
                        zm[(k, i)] = C64::new(c * zi.re - s * f, c * zi.im - s * fi);
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    e.pop();
    Ok(())
}

fn l2_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[inline]
fn copysign(mag: f64, sign: f64) -> f64 {
    if sign < 0.0 {
        -mag.abs()
    } else {
        mag.abs()
    }
}
