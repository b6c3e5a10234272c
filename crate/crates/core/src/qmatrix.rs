//! Quaternion matrices `P = P1 + P2·j2` and their complex adjoint.
//!
//! The adjoint `χ(P) = [[P1, P2], [-conj(P2), conj(P1)]]` is a ring
//! homomorphism: `χ(PQ) = χ(P)χ(Q)` and `χ(P^‡) = χ(P)^H`. Eigenproblems are
//! solved on `χ`, whose spectrum is the quaternion spectrum with each value
//! repeated twice.

use ndarray::{s, Array2, Axis};
use num_complex::Complex64;

use crate::error::QuaternionError;
use crate::linalg::{conj_transpose, eigh, max_abs, CMatrix};
use crate::quaternion::Quaternion;

const C0: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct QMatrix {
    pub p1: CMatrix,
    pub p2: CMatrix,
}

impl QMatrix {
    pub fn new(p1: CMatrix, p2: CMatrix) -> Result<Self, QuaternionError> {
        if p1.dim() != p2.dim() {
            return Err(QuaternionError::PartShape(p1.dim(), p2.dim()));
        }
        Ok(Self { p1, p2 })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            p1: Array2::zeros((rows, cols)),
            p2: Array2::zeros((rows, cols)),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            p1: crate::linalg::identity(n),
            p2: Array2::zeros((n, n)),
        }
    }

    pub fn from_complex(p1: CMatrix) -> Self {
        let p2 = Array2::zeros(p1.dim());
        Self { p1, p2 }
    }

    pub fn rows(&self) -> usize {
        self.p1.nrows()
    }

    pub fn cols(&self) -> usize {
        self.p1.ncols()
    }

    pub fn get(&self, i: usize, j: usize) -> Quaternion {
        Quaternion::new(self.p1[[i, j]], self.p2[[i, j]])
    }

    pub fn set(&mut self, i: usize, j: usize, q: Quaternion) {
        self.p1[[i, j]] = q.c1;
        self.p2[[i, j]] = q.c2;
    }

    /// Quaternion matrix product.
    pub fn mul(&self, rhs: &QMatrix) -> Result<QMatrix, QuaternionError> {
        if self.cols() != rhs.rows() {
            return Err(QuaternionError::DimensionMismatch {
                left_cols: self.cols(),
                right_rows: rhs.rows(),
            });
        }
        let b1c = rhs.p1.mapv(|z| z.conj());
        let b2c = rhs.p2.mapv(|z| z.conj());
        Ok(QMatrix {
            p1: self.p1.dot(&rhs.p1) - self.p2.dot(&b2c),
            p2: self.p1.dot(&rhs.p2) + self.p2.dot(&b1c),
        })
    }

    /// Quaternion conjugate transpose `P^‡`.
    pub fn conj_transpose(&self) -> QMatrix {
        QMatrix {
            p1: conj_transpose(&self.p1),
            p2: self.p2.t().mapv(|z| -z),
        }
    }

    pub fn add(&self, rhs: &QMatrix) -> QMatrix {
        QMatrix {
            p1: &self.p1 + &rhs.p1,
            p2: &self.p2 + &rhs.p2,
        }
    }

    pub fn sub(&self, rhs: &QMatrix) -> QMatrix {
        QMatrix {
            p1: &self.p1 - &rhs.p1,
            p2: &self.p2 - &rhs.p2,
        }
    }

    pub fn scale(&self, s: f64) -> QMatrix {
        QMatrix {
            p1: self.p1.mapv(|z| z * s),
            p2: self.p2.mapv(|z| z * s),
        }
    }

    /// Complex adjoint `[[P1, P2], [-conj(P2), conj(P1)]]`.
    pub fn to_adjoint(&self) -> CMatrix {
        let (r, c) = self.p1.dim();
        let mut out = Array2::zeros((2 * r, 2 * c));
        out.slice_mut(s![..r, ..c]).assign(&self.p1);
        out.slice_mut(s![..r, c..]).assign(&self.p2);
        out.slice_mut(s![r.., ..c]).assign(&self.p2.mapv(|z| -z.conj()));
        out.slice_mut(s![r.., c..]).assign(&self.p1.mapv(|z| z.conj()));
        out
    }

    /// Inverse of [`QMatrix::to_adjoint`]; rejects matrices without the
    /// adjoint block structure beyond `tol` (relative to the largest entry).
    pub fn from_adjoint(chi: &CMatrix, tol: f64) -> Result<QMatrix, QuaternionError> {
        let (rr, cc) = chi.dim();
        if rr % 2 != 0 || cc % 2 != 0 {
            return Err(QuaternionError::OddAdjoint { rows: rr, cols: cc });
        }
        let (r, c) = (rr / 2, cc / 2);
        let p1 = chi.slice(s![..r, ..c]).to_owned();
        let p2 = chi.slice(s![..r, c..]).to_owned();
        let bl = chi.slice(s![r.., ..c]);
        let br = chi.slice(s![r.., c..]);
        let mut dev = 0.0f64;
        for i in 0..r {
            for j in 0..c {
                dev = dev.max((bl[[i, j]] + p2[[i, j]].conj()).norm());
                dev = dev.max((br[[i, j]] - p1[[i, j]].conj()).norm());
            }
        }
        if dev > tol * max_abs(chi).max(1.0) {
            return Err(QuaternionError::NotAdjoint { deviation: dev });
        }
        Ok(QMatrix { p1, p2 })
    }

    /// Largest deviation from `P = P^‡`.
    pub fn self_conjugate_defect(&self) -> f64 {
        if self.rows() != self.cols() {
            return f64::INFINITY;
        }
        let n = self.rows();
        let mut dev = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                dev = dev.max((self.p1[[i, j]] - self.p1[[j, i]].conj()).norm());
                dev = dev.max((self.p2[[i, j]] + self.p2[[j, i]]).norm());
            }
        }
        dev
    }

    pub fn is_self_conjugated(&self, tol: f64) -> bool {
        self.self_conjugate_defect() <= tol * self.max_abs().max(1.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.p1
            .iter()
            .zip(self.p2.iter())
            .map(|(a, b)| (a.norm_sqr() + b.norm_sqr()).sqrt())
            .fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.p1
            .iter()
            .chain(self.p2.iter())
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Columns `range` as a new quaternion matrix.
    pub fn columns(&self, start: usize, end: usize) -> QMatrix {
        QMatrix {
            p1: self.p1.slice(s![.., start..end]).to_owned(),
            p2: self.p2.slice(s![.., start..end]).to_owned(),
        }
    }

    /// Rows `range` as a new quaternion matrix.
    pub fn row_block(&self, start: usize, end: usize) -> QMatrix {
        QMatrix {
            p1: self.p1.slice(s![start..end, ..]).to_owned(),
            p2: self.p2.slice(s![start..end, ..]).to_owned(),
        }
    }

    /// Stacks `self` over `below`.
    pub fn vstack(&self, below: &QMatrix) -> QMatrix {
        QMatrix {
            p1: ndarray::concatenate(Axis(0), &[self.p1.view(), below.p1.view()]).expect("column counts agree"),
            p2: ndarray::concatenate(Axis(0), &[self.p2.view(), below.p2.view()]).expect("column counts agree"),
        }
    }
}

/// Quaternion matrix product.
pub fn qmat_mul(a: &QMatrix, b: &QMatrix) -> Result<QMatrix, QuaternionError> {
    a.mul(b)
}

pub fn qmat_conj_transpose(a: &QMatrix) -> QMatrix {
    a.conj_transpose()
}

pub fn to_adjoint(p: &QMatrix) -> CMatrix {
    p.to_adjoint()
}

pub fn from_adjoint(chi: &CMatrix, tol: f64) -> Result<QMatrix, QuaternionError> {
    QMatrix::from_adjoint(chi, tol)
}

/// Eigen-decomposition `B = U Λ U^‡` of a self-conjugated quaternion matrix.
#[derive(Debug, Clone)]
pub struct QEvd {
    /// Real eigenvalues, descending.
    pub values: Vec<f64>,
    /// Quaternion-orthonormal eigenvectors, one per column.
    pub vectors: QMatrix,
}

/// Relative gap below which adjoint eigenvalues are treated as one cluster.
pub const EIGEN_CLUSTER_TOL: f64 = 1e-9;
/// Self-conjugacy tolerance relative to the largest entry.
pub const SELF_CONJUGATE_TOL: f64 = 1e-10;

/// Eigen-decomposition of a self-conjugated quaternion matrix through its
/// complex adjoint.
pub fn qevd_self_conjugated(b: &QMatrix) -> Result<QEvd, QuaternionError> {
    let n = b.rows();
    if b.cols() != n {
        return Err(QuaternionError::DimensionMismatch {
            left_cols: b.cols(),
            right_rows: n,
        });
    }
    let defect = b.self_conjugate_defect();
    if defect > SELF_CONJUGATE_TOL * b.max_abs().max(1.0) {
        return Err(QuaternionError::NotSelfConjugated { deviation: defect });
    }
    if n == 0 {
        return Ok(QEvd {
            values: Vec::new(),
            vectors: QMatrix::zeros(0, 0),
        });
    }
    let eig = eigh(&b.to_adjoint())?;
    let scale = eig.values.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);

    let mut values = Vec::with_capacity(n);
    let mut vectors = QMatrix::zeros(n, n);
    // Complex images [u1; -conj(u2)] and [u2; conj(u1)] of each accepted
    // quaternion vector, for projection.
    let mut start = 0;
    while start < 2 * n {
        let mut end = start + 1;
        while end < 2 * n && (eig.values[end - 1] - eig.values[end]) <= EIGEN_CLUSTER_TOL * scale {
            end += 1;
        }
        if (end - start) % 2 == 1 {
            if end == 2 * n {
                return Err(QuaternionError::Unpaired);
            }
            end += 1;
        }
        let cluster: Vec<usize> = (start..end).collect();
        let picked = pair_cluster(&eig.vectors, &cluster, n);
        for (k, (top, bot)) in picked.into_iter().enumerate() {
            let col = values.len();
            let lam = 0.5 * (eig.values[start + 2 * k] + eig.values[start + 2 * k + 1]);
            values.push(lam);
            for i in 0..n {
                vectors.p1[[i, col]] = top[i];
                vectors.p2[[i, col]] = -bot[i].conj();
            }
        }
        start = end;
    }
    if values.len() != n {
        return Err(QuaternionError::Unpaired);
    }
    Ok(QEvd { values, vectors })
}

/// Pivoted Gram-Schmidt over the J-invariant span of `cluster`; returns the
/// `(top, bottom)` halves of `cluster.len() / 2` complex vectors whose
/// J-partners `[-conj(bottom); conj(top)]` complete an orthonormal basis.
fn pair_cluster(vecs: &CMatrix, cluster: &[usize], n: usize) -> Vec<(Vec<Complex64>, Vec<Complex64>)> {
    let mut residual: Vec<Vec<Complex64>> = cluster.iter().map(|&c| vecs.column(c).to_vec()).collect();
    let want = cluster.len() / 2;
    let mut out = Vec::with_capacity(want);
    for _ in 0..want {
        let (best, _) = residual
            .iter()
            .enumerate()
            .map(|(k, r)| (k, r.iter().map(|z| z.norm_sqr()).sum::<f64>()))
            .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        let r = residual.swap_remove(best);
        let norm = r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let v: Vec<Complex64> = r.iter().map(|z| z / norm).collect();
        let jv: Vec<Complex64> = (0..2 * n)
            .map(|i| if i < n { -v[n + i].conj() } else { v[i - n].conj() })
            .collect();
        for res in residual.iter_mut() {
            for basis in [&v, &jv] {
                let proj: Complex64 = basis.iter().zip(res.iter()).map(|(b, x)| b.conj() * x).sum();
                if proj != C0 {
                    for (x, b) in res.iter_mut().zip(basis.iter()) {
                        *x -= b * proj;
                    }
                }
            }
        }
        out.push((v[..n].to_vec(), v[n..].to_vec()));
    }
    out
}
