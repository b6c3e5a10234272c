//! Dense complex linear algebra on `ndarray` matrices.
//!
//! The Hermitian eigensolver reduces to real symmetric tridiagonal form with
//! complex Householder reflectors, then runs implicit QL with eigenvector
//! accumulation. Work arrays are column-major so that reflector and rotation
//! updates touch contiguous memory.

use ndarray::{Array1, Array2, ArrayView2};
use num_complex::Complex64;

use crate::error::LinalgError;

pub type CMatrix = Array2<Complex64>;
pub type CVector = Array1<Complex64>;
pub type RMatrix = Array2<f64>;

const C0: Complex64 = Complex64::new(0.0, 0.0);
const MAX_QL_ITERATIONS: usize = 60;

/// Eigen-decomposition of a Hermitian matrix, eigenvalues in descending order.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub values: Vec<f64>,
    /// Unit-norm eigenvectors, one per column, in the order of `values`.
    pub vectors: CMatrix,
}

pub fn conj_transpose(a: &CMatrix) -> CMatrix {
    a.t().mapv(|z| z.conj())
}

pub fn identity(n: usize) -> CMatrix {
    Array2::from_diag_elem(n, Complex64::new(1.0, 0.0))
}

/// Largest entry-wise deviation from Hermitian symmetry.
pub fn hermitian_defect(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((a[[i, j]] - a[[j, i]].conj()).norm());
        }
    }
    worst
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().fold(0.0f64, |m, z| m.max(z.norm()))
}

pub fn frobenius(a: ArrayView2<Complex64>) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigen-decomposition of a Hermitian matrix.
///
/// Only the lower triangle is trusted; the input is symmetrized from it.
pub fn eigh(a: &CMatrix) -> Result<HermitianEig, LinalgError> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(LinalgError::NotSquare {
            rows: n,
            cols: a.ncols(),
        });
    }
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(LinalgError::NonFinite);
    }
    if n == 0 {
        return Ok(HermitianEig {
            values: Vec::new(),
            vectors: Array2::zeros((0, 0)),
        });
    }

    // Column-major copy, Hermitian completion from the lower triangle.
    let mut w = vec![C0; n * n];
    for j in 0..n {
        for i in j..n {
            let z = a[[i, j]];
            w[i + j * n] = z;
            w[j + i * n] = z.conj();
        }
        w[j + j * n] = Complex64::new(a[[j, j]].re, 0.0);
    }

    let (mut d, mut e, reflectors) = tridiagonalize(&mut w, n);
    let mut q = accumulate_reflectors(&reflectors, n);
    tql2(&mut d, &mut e, &mut q, n)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[j].total_cmp(&d[i]));
    let values = order.iter().map(|&k| d[k]).collect();
    let mut vectors = Array2::zeros((n, n));
    for (col, &k) in order.iter().enumerate() {
        for i in 0..n {
            vectors[[i, col]] = q[i + k * n];
        }
    }
    Ok(HermitianEig { values, vectors })
}

struct Reflector {
    /// Index of the first row the reflector acts on.
    offset: usize,
    /// `v[0] = 1`.
    v: Vec<Complex64>,
    /// `G = I - sigma v v^H` maps the column below the diagonal to `beta e1`.
    sigma: Complex64,
}

/// Householder vector for `x`: returns `(beta, sigma, v)` with
/// `(I - sigma v v^H) x = beta e1`, `beta` real, `v[0] = 1`.
fn householder(x: &[Complex64]) -> (f64, Complex64, Vec<Complex64>) {
    let alpha = x[0];
    let tail_sq: f64 = x[1..].iter().map(|z| z.norm_sqr()).sum();
    let mut v = vec![C0; x.len()];
    v[0] = Complex64::new(1.0, 0.0);
    if tail_sq == 0.0 && alpha.im == 0.0 {
        return (alpha.re, C0, v);
    }
    let norm = (alpha.norm_sqr() + tail_sq).sqrt();
    let beta = if alpha.re >= 0.0 { -norm } else { norm };
    let sigma = (Complex64::new(beta, 0.0) - alpha.conj()) / beta;
    let scale = Complex64::new(1.0, 0.0) / (alpha - beta);
    for (vi, xi) in v[1..].iter_mut().zip(&x[1..]) {
        *vi = xi * scale;
    }
    (beta, sigma, v)
}

fn tridiagonalize(w: &mut [Complex64], n: usize) -> (Vec<f64>, Vec<f64>, Vec<Reflector>) {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut reflectors = Vec::with_capacity(n.saturating_sub(2));
    let mut y = vec![C0; n];
    for k in 0..n.saturating_sub(1) {
        let off = k + 1;
        let m = n - off;
        let (beta, sigma, v) = householder(&w[off + k * n..n + k * n]);
        e[k] = beta;
        if sigma != C0 {
            // y = A22 v
            let y = &mut y[..m];
            y.iter_mut().for_each(|z| *z = C0);
            for j in 0..m {
                let col = &w[off + (off + j) * n..n + (off + j) * n];
                let vj = v[j];
                for (yi, aij) in y.iter_mut().zip(col) {
                    *yi += aij * vj;
                }
            }
            let vhy: Complex64 = v.iter().zip(y.iter()).map(|(vi, yi)| vi.conj() * yi).sum();
            let half = 0.5 * sigma.norm_sqr() * vhy.re;
            let sc = sigma.conj();
            let wv: Vec<Complex64> = y.iter().zip(&v).map(|(yi, vi)| sc * yi - vi * half).collect();
            // A22 -= v w^H + w v^H
            for j in 0..m {
                let wj = wv[j].conj();
                let vj = v[j].conj();
                let col = &mut w[off + (off + j) * n..n + (off + j) * n];
                for i in 0..m {
                    col[i] -= v[i] * wj + wv[i] * vj;
                }
            }
            reflectors.push(Reflector {
                offset: off,
                v,
                sigma,
            });
        }
    }
    for k in 0..n {
        d[k] = w[k + k * n].re;
    }
    e[n - 1] = 0.0;
    (d, e, reflectors)
}

/// Forms `Q = G_0^H G_1^H ...` column-major, so that `A = Q T Q^H`.
fn accumulate_reflectors(reflectors: &[Reflector], n: usize) -> Vec<Complex64> {
    let mut q = vec![C0; n * n];
    for i in 0..n {
        q[i + i * n] = Complex64::new(1.0, 0.0);
    }
    let mut z = vec![C0; n];
    for r in reflectors.iter().rev() {
        let off = r.offset;
        let m = n - off;
        let sc = r.sigma.conj();
        // Q[off.., off..] <- (I - conj(sigma) v v^H) Q[off.., off..]
        for j in off..n {
            let col = &q[off + j * n..n + j * n];
            z[j] = r.v.iter().zip(col).map(|(vi, qi)| vi.conj() * qi).sum();
        }
        for j in off..n {
            let f = sc * z[j];
            if f == C0 {
                continue;
            }
            let col = &mut q[off + j * n..n + j * n];
            for i in 0..m {
                col[i] -= r.v[i] * f;
            }
        }
    }
    q
}

/// Implicit QL on the symmetric tridiagonal `(d, e)` with `e[i] = T[i+1, i]`,
/// rotating the columns of `z`.
fn tql2(d: &mut [f64], e: &mut [f64], z: &mut [Complex64], n: usize) -> Result<(), LinalgError> {
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1 = 0.0f64;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_QL_ITERATIONS {
                    return Err(LinalgError::NoConvergence { index: l });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    let (lo, hi) = z.split_at_mut((i + 1) * n);
                    let zi = &mut lo[i * n..];
                    let zi1 = &mut hi[..n];
                    for k in 0..n {
                        let t = zi1[k];
                        zi1[k] = zi[k] * s + t * c;
                        zi[k] = zi[k] * c - t * s;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// Cholesky factor `L` (lower) of a Hermitian positive-definite matrix.
pub fn cholesky(a: &CMatrix) -> Result<CMatrix, LinalgError> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(LinalgError::NotSquare {
            rows: n,
            cols: a.ncols(),
        });
    }
    let scale = (0..n).fold(0.0f64, |m, i| m.max(a[[i, i]].re.abs()));
    let mut l = Array2::<Complex64>::zeros((n, n));
    for j in 0..n {
        let mut diag = a[[j, j]].re;
        for k in 0..j {
            diag -= l[[j, k]].norm_sqr();
        }
        if !(diag > 1e-14 * scale) {
            return Err(LinalgError::NotPositiveDefinite { pivot: j });
        }
        let ljj = diag.sqrt();
        l[[j, j]] = Complex64::new(ljj, 0.0);
        for i in j + 1..n {
            let mut s = a[[i, j]];
            for k in 0..j {
                s -= l[[i, k]] * l[[j, k]].conj();
            }
            l[[i, j]] = s / ljj;
        }
    }
    Ok(l)
}

/// Solves `A X = B` for Hermitian positive-definite `A`.
pub fn solve_hpd(a: &CMatrix, b: &CMatrix) -> Result<CMatrix, LinalgError> {
    let l = cholesky(a)?;
    let n = l.nrows();
    if b.nrows() != n {
        return Err(LinalgError::DimensionMismatch {
            expected: n,
            found: b.nrows(),
        });
    }
    let mut x = b.clone();
    for c in 0..x.ncols() {
        for i in 0..n {
            let mut s = x[[i, c]];
            for k in 0..i {
                s -= l[[i, k]] * x[[k, c]];
            }
            x[[i, c]] = s / l[[i, i]];
        }
        for i in (0..n).rev() {
            let mut s = x[[i, c]];
            for k in i + 1..n {
                s -= l[[k, i]].conj() * x[[k, c]];
            }
            x[[i, c]] = s / l[[i, i]];
        }
    }
    Ok(x)
}

/// Inverse of a real symmetric positive-definite matrix.
pub fn inverse_spd(a: &RMatrix) -> Result<RMatrix, LinalgError> {
    let n = a.nrows();
    let ac = a.mapv(|x| Complex64::new(x, 0.0));
    let inv = solve_hpd(&ac, &identity(n))?;
    let mut out = inv.mapv(|z| z.re);
    for i in 0..n {
        for j in 0..i {
            let s = 0.5 * (out[[i, j]] + out[[j, i]]);
            out[[i, j]] = s;
            out[[j, i]] = s;
        }
    }
    Ok(out)
}

/// `P⊥ = I - A (A^H A)^{-1} A^H`.
pub fn orthogonal_projector(a: &CMatrix) -> Result<CMatrix, LinalgError> {
    let ah = conj_transpose(a);
    let gram = ah.dot(a);
    let coef = solve_hpd(&gram, &ah)?;
    Ok(identity(a.nrows()) - a.dot(&coef))
}
