//! MUSIC null spectra. Smaller is better; every spectrum vanishes at a true
//! direction when the subspaces are exact.
//!
//! Projections onto the noise subspace are evaluated through the signal
//! basis (`P_N = I - P_S`), which costs `O(M L)` per direction instead of
//! `O(M²)`.

use std::f64::consts::TAU;

use ndarray::Array1;
use num_complex::Complex64;

use super::subspace::{LvSubspaces, NcSubspaces, QSubspaces};
use crate::error::MusicError;
use crate::linalg::{CMatrix, CVector};
use crate::quaternion::Quaternion;
use crate::signal::{polarization_response, steering_vector, ArrayConfig, PolarizationResponse};

const C0: Complex64 = Complex64::new(0.0, 0.0);
/// A DR denominator below this fraction of `‖a‖²` is treated as zero.
pub const DEGENERATE_DENOMINATOR: f64 = 1e-12;

/// `U^H a` for a complex basis `U` (M × K).
fn project(u: &CMatrix, a: &CVector) -> Vec<Complex64> {
    u.columns()
        .into_iter()
        .map(|col| col.iter().zip(a.iter()).map(|(x, y)| x.conj() * y).sum())
        .collect()
}

/// `U^T a` for a complex basis `U`.
fn project_t(u: &CMatrix, a: &CVector) -> Vec<Complex64> {
    u.columns()
        .into_iter()
        .map(|col| col.iter().zip(a.iter()).map(|(x, y)| x * y).sum())
        .collect()
}

fn dot_h(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

fn sq(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum()
}

/// The 2×2 Hermitian form `B^H P_N B` with `B = blockdiag(a, a)`; entry
/// `[j][k] = a^H U_Nj U_Nk^H a`.
pub fn polarization_gram(sub: &LvSubspaces, theta: f64, phi: f64) -> [[Complex64; 2]; 2] {
    let a = steering_vector(&sub.cfg, theta, phi);
    gram_from_steering(sub, &a)
}

fn gram_from_steering(sub: &LvSubspaces, a: &CVector) -> [[Complex64; 2]; 2] {
    let norm = sq(a.as_slice().expect("contiguous"));
    let s1 = project(&sub.us1, a);
    let s2 = project(&sub.us2, a);
    let g11 = norm - sq(&s1);
    let g22 = norm - sq(&s2);
    let g12 = -dot_h(&s1, &s2);
    [
        [Complex64::new(g11, 0.0), g12],
        [g12.conj(), Complex64::new(g22, 0.0)],
    ]
}

fn quadratic(g: &[[Complex64; 2]; 2], xi: &PolarizationResponse) -> f64 {
    let v = [xi.xi1, xi.xi2];
    let mut acc = C0;
    for j in 0..2 {
        for k in 0..2 {
            acc += v[j].conj() * g[j][k] * v[k];
        }
    }
    acc.re
}

/// Four-parameter long-vector MUSIC spectrum `‖U_N^H â‖²`, computed directly
/// from a 2M × K noise basis.
pub fn spectrum_lv(cfg: &ArrayConfig, theta: f64, phi: f64, gamma: f64, eta: f64, noise: &CMatrix) -> f64 {
    let a = steering_vector(cfg, theta, phi);
    let xi = polarization_response(theta, phi, gamma, eta);
    let m = cfg.elements();
    let mut full = Array1::from_elem(2 * m, C0);
    for i in 0..m {
        full[i] = a[i] * xi.xi1;
        full[m + i] = a[i] * xi.xi2;
    }
    sq(&project(noise, &full))
}

/// Quaternion MUSIC DOA spectrum `Re(a^H U_N U_N^‡ a)`.
pub fn spectrum_qdr_doa(theta: f64, phi: f64, sub: &QSubspaces) -> f64 {
    let a = steering_vector(&sub.cfg, theta, phi);
    let norm = sq(a.as_slice().expect("contiguous"));
    // Part 1 of U_S U_S^‡ is U1 U1^H + U2 U2^H.
    norm - sq(&project(&sub.signal.p1, &a)) - sq(&project(&sub.signal.p2, &a))
}

/// Polarization spectrum for a fixed DOA; equals [`spectrum_lv`] at the same
/// four parameters.
pub fn spectrum_qdr_pol(gamma: f64, eta: f64, theta: f64, phi: f64, sub: &LvSubspaces) -> f64 {
    let g = polarization_gram(sub, theta, phi);
    quadratic(&g, &polarization_response(theta, phi, gamma, eta))
}

pub(crate) fn polarization_form(g: &[[Complex64; 2]; 2], theta: f64, phi: f64, gamma: f64, eta: f64) -> f64 {
    quadratic(g, &polarization_response(theta, phi, gamma, eta))
}

/// `p_jk = a^H U_Nj U_Nk^H a` for the long-vector noise halves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrTerms {
    pub p11: f64,
    pub p12: Complex64,
    pub p22: f64,
    /// `‖a‖²`.
    pub norm: f64,
}

pub fn dr_terms(theta: f64, phi: f64, sub: &LvSubspaces) -> DrTerms {
    let a = steering_vector(&sub.cfg, theta, phi);
    let g = gram_from_steering(sub, &a);
    DrTerms {
        p11: g[0][0].re,
        p12: g[0][1],
        p22: g[1][1].re,
        norm: sq(a.as_slice().expect("contiguous")),
    }
}

impl DrTerms {
    fn degenerate(&self) -> bool {
        !(self.p22 > DEGENERATE_DENOMINATOR * self.norm)
    }
}

/// Dimension-reduced DOA spectrum `p11 - |p12|²/p22`; `None` where the
/// denominator vanishes.
pub fn spectrum_dr_doa(theta: f64, phi: f64, sub: &LvSubspaces) -> Option<f64> {
    let t = dr_terms(theta, phi, sub);
    (!t.degenerate()).then(|| t.p11 - t.p12.norm_sqr() / t.p22)
}

/// `(γ, η)` minimizing the long-vector spectrum at a fixed DOA, from the
/// ratio `ξ2/ξ1 = -p21/p22`.
pub fn polarization_closed_form(theta: f64, phi: f64, sub: &LvSubspaces) -> Result<(f64, f64), MusicError> {
    let t = dr_terms(theta, phi, sub);
    if t.degenerate() {
        return Err(MusicError::DegeneratePolarization);
    }
    let ratio = -t.p12.conj() / t.p22;
    polarization_from_ratio(theta, phi, ratio)
}

/// Inverts `ξ2/ξ1 = ratio` for the polarization angles.
pub fn polarization_from_ratio(theta: f64, phi: f64, ratio: Complex64) -> Result<(f64, f64), MusicError> {
    let (st, ct) = theta.sin_cos();
    let cp = phi.cos();
    let num = ratio * st + ct;
    let den = (ratio * ct - st) * cp;
    let g = num / den;
    if !(g.re.is_finite() && g.im.is_finite()) || den.norm() <= f64::MIN_POSITIVE {
        return Err(MusicError::DegeneratePolarization);
    }
    let gamma = g.norm().atan();
    let eta = if g.norm() == 0.0 { 0.0 } else { g.arg().rem_euclid(TAU) };
    Ok((gamma, if eta >= TAU { 0.0 } else { eta }))
}

/// Reduction terms of the non-circular quaternion spectrum at one direction.
///
/// `pi1 = a^H Ū_N1 Ū_N1^‡ a`, `pi2 = a^T Ū_N2 Ū_N2^‡ a*` (both real) and
/// `pi3 = a^T Ū_N2 Ū_N1^‡ a`, with `Ū_N1`/`Ū_N2` the top/bottom halves of the
/// extended noise basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QncTerms {
    pub pi1: f64,
    pub pi2: f64,
    pub pi3: Quaternion,
}

/// `U^‡ a` for a quaternion basis `U` and complex `a`, as `(part1, part2)`.
fn q_project(u1: &CMatrix, u2: &CMatrix, a: &CVector, a_conj: &CVector) -> (Vec<Complex64>, Vec<Complex64>) {
    let c1 = project(u1, a);
    let c2 = project_t(u2, a_conj).into_iter().map(|z| -z).collect();
    (c1, c2)
}

pub fn qnc_terms(theta: f64, phi: f64, sub: &NcSubspaces) -> QncTerms {
    let a = steering_vector(&sub.cfg, theta, phi);
    let ac = a.mapv(|z| z.conj());
    let norm = sq(a.as_slice().expect("contiguous"));
    let (v1a, v1b) = q_project(&sub.signal_top.p1, &sub.signal_top.p2, &a, &ac);
    let (v2a, v2b) = q_project(&sub.signal_bottom.p1, &sub.signal_bottom.p2, &ac, &a);
    let mut cross = Quaternion::ZERO;
    for k in 0..v1a.len() {
        cross += Quaternion::new(v2a[k], v2b[k]).conj() * Quaternion::new(v1a[k], v1b[k]);
    }
    QncTerms {
        pi1: norm - sq(&v1a) - sq(&v1b),
        pi2: norm - sq(&v2a) - sq(&v2b),
        pi3: -cross,
    }
}

impl QncTerms {
    /// Minimum over unit quaternion weights `q` of
    /// `½‖Ū_N^‡ [a·q; a*·(j2 q j2⁻¹)]‖²`.
    pub fn spectrum(&self) -> f64 {
        let reach = (self.pi3.norm_sqr() - self.pi3.c2.re * self.pi3.c2.re).max(0.0).sqrt();
        0.5 * (self.pi1 + self.pi2) - reach
    }
}

/// Non-circular quaternion MUSIC DOA spectrum.
pub fn spectrum_qnc_doa(theta: f64, phi: f64, sub: &NcSubspaces) -> f64 {
    qnc_terms(theta, phi, sub).spectrum()
}
