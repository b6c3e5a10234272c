#![allow(dead_code)]

use nalgebra::DMatrix;
use ncmusic_core::linalg::{conj_transpose, CMatrix};
use ncmusic_core::QMatrix;
use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(rows: usize, cols: usize, rng: &mut impl Rng) -> CMatrix {
    Array2::from_shape_fn((rows, cols), |_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

pub fn random_qmatrix(rows: usize, cols: usize, rng: &mut impl Rng) -> QMatrix {
    QMatrix {
        p1: random_complex(rows, cols, rng),
        p2: random_complex(rows, cols, rng),
    }
}

/// `G G^‡` for a random `G`: self-conjugated and positive semi-definite.
pub fn random_self_conjugated(n: usize, rng: &mut impl Rng) -> QMatrix {
    let g = random_qmatrix(n, n, rng);
    g.mul(&g.conj_transpose()).unwrap()
}

pub fn random_hermitian(n: usize, rng: &mut impl Rng) -> CMatrix {
    let g = random_complex(n, n, rng);
    &g + &conj_transpose(&g)
}

pub fn to_nalgebra(a: &CMatrix) -> DMatrix<Complex64> {
    DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[[i, j]])
}

/// Eigenvalues (descending) from nalgebra's Hermitian solver.
pub fn oracle_eigenvalues(a: &CMatrix) -> Vec<f64> {
    let e = to_nalgebra(a).symmetric_eigen();
    let mut v: Vec<f64> = e.eigenvalues.iter().copied().collect();
    v.sort_by(|x, y| y.total_cmp(x));
    v
}

pub fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn qmax_diff(a: &QMatrix, b: &QMatrix) -> f64 {
    max_diff(&a.p1, &b.p1).max(max_diff(&a.p2, &b.p2))
}

/// Smallest eigenvalue of a real symmetric matrix, by nalgebra.
pub fn oracle_min_eigenvalue(m: &[[f64; 4]; 4]) -> f64 {
    let d = DMatrix::from_fn(4, 4, |i, j| m[i][j]);
    d.symmetric_eigen().eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

pub fn deg(x: f64) -> f64 {
    x.to_radians()
}
