//! Stochastic Cramér-Rao bound for DOA and polarization of non-circular
//! Gaussian sources, and the ML noise-variance estimate it needs.
//!
//! Parameters are ordered in blocks `[θ_1..θ_L, φ_1..φ_L, γ_1..γ_L,
//! η_1..η_L]`. The bound covers `N` independent snapshots.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use ndarray::{s, Array2};
use num_complex::Complex64;

use crate::error::{CrbError, LinalgError};
use crate::linalg::{conj_transpose, eigh, inverse_spd, orthogonal_projector, solve_hpd, CMatrix, RMatrix};
use crate::music::sample_cov_lv;
use crate::signal::{manifold_lv, steering_vector, ArrayConfig, SignalKind, SnapshotSet, SourceParams};

const C0: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);
const PARAM_NAMES: [&str; 4] = ["theta", "phi", "gamma", "eta"];

#[derive(Debug, Clone)]
pub struct CrbInputs {
    pub cfg: ArrayConfig,
    pub sources: Vec<SourceParams>,
    /// `E[s s^H]` (L × L).
    pub source_cov: CMatrix,
    /// `E[s s^T]` (L × L).
    pub pseudo_cov: CMatrix,
    pub noise_var: f64,
    pub snapshots: usize,
}

impl CrbInputs {
    /// Uncorrelated sources with powers and non-circularity from `sources`.
    pub fn from_scene(
        cfg: &ArrayConfig,
        sources: &[SourceParams],
        kind: SignalKind,
        noise_var: f64,
        snapshots: usize,
    ) -> Self {
        let l = sources.len();
        let mut source_cov = Array2::zeros((l, l));
        let mut pseudo_cov = Array2::zeros((l, l));
        for (k, src) in sources.iter().enumerate() {
            source_cov[[k, k]] = Complex64::new(src.power, 0.0);
            pseudo_cov[[k, k]] = Complex64::from_polar(kind.nc_rate(src) * src.power, src.nc_phase);
        }
        Self {
            cfg: *cfg,
            sources: sources.to_vec(),
            source_cov,
            pseudo_cov,
            noise_var,
            snapshots,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CrbResult {
    /// Bound on the parameter covariance (4L × 4L), radians².
    pub covariance: RMatrix,
    /// Condition number of the augmented data covariance.
    pub condition_number: f64,
}

impl CrbResult {
    /// Square-root diagonal for parameter `p` (0 = θ, 1 = φ, 2 = γ, 3 = η)
    /// of every source, radians.
    pub fn std_devs(&self, p: usize) -> Vec<f64> {
        let l = self.covariance.nrows() / 4;
        (0..l).map(|k| self.covariance[[p * l + k, p * l + k]].max(0.0).sqrt()).collect()
    }
}

/// Derivatives of the long-vector manifold: column `p·L + l` is
/// `∂ā_l/∂(parameter p of source l)` (2M × 4L).
pub fn steering_derivatives(cfg: &ArrayConfig, sources: &[SourceParams]) -> CMatrix {
    let m = cfg.elements();
    let l = sources.len();
    let k = cfg.wavenumber_spacing();
    let mut d = Array2::zeros((2 * m, 4 * l));
    for (idx, src) in sources.iter().enumerate() {
        warn_on_boundary(idx, src);
        let (st, ct) = src.theta.sin_cos();
        let (sp, cp) = src.phi.sin_cos();
        let (sg, cg) = src.gamma.sin_cos();
        let e = Complex64::from_polar(1.0, src.eta);
        let a = steering_vector(cfg, src.theta, src.phi);
        // Polarization vector p = [sinγ e^{iη}; cosγ] and rotation columns.
        let p = [e * sg, Complex64::new(cg, 0.0)];
        let rot = |r: [[f64; 2]; 2], v: [Complex64; 2]| [v[0] * r[0][0] + v[1] * r[0][1], v[0] * r[1][0] + v[1] * r[1][1]];
        let r0 = [[ct * cp, -st], [st * cp, ct]];
        let xi = rot(r0, p);
        let dxi_theta = rot([[-st * cp, -ct], [ct * cp, -st]], p);
        let dxi_phi = rot([[-ct * sp, 0.0], [-st * sp, 0.0]], p);
        let dxi_gamma = rot(r0, [e * cg, Complex64::new(-sg, 0.0)]);
        let dxi_eta = rot(r0, [I * e * sg, C0]);
        for my in 0..cfg.my {
            for mx in 0..cfg.mx {
                let i = my * cfg.mx + mx;
                let (fx, fy) = (mx as f64, my as f64);
                let da_theta = a[i] * I * (k * sp * (-fx * st + fy * ct));
                let da_phi = a[i] * I * (k * cp * (fx * ct + fy * st));
                for half in 0..2 {
                    let row = half * m + i;
                    d[[row, idx]] = da_theta * xi[half] + a[i] * dxi_theta[half];
                    d[[row, l + idx]] = da_phi * xi[half] + a[i] * dxi_phi[half];
                    d[[row, 2 * l + idx]] = a[i] * dxi_gamma[half];
                    d[[row, 3 * l + idx]] = a[i] * dxi_eta[half];
                }
            }
        }
    }
    d
}

fn warn_on_boundary(idx: usize, src: &SourceParams) {
    let near = |x: f64, lo: f64, hi: f64| (x - lo).abs() < 1e-9 || (hi - x).abs() < 1e-9;
    if near(src.theta, 0.0, PI) || near(src.phi, 0.0, FRAC_PI_2) || near(src.gamma, 0.0, FRAC_PI_2) || near(src.eta, 0.0, TAU)
    {
        log::warn!("source {idx} lies on a parameter-range boundary; derivatives are taken as one-sided limits");
    }
}

/// Bound for the non-circular Gaussian model with analytic derivatives.
pub fn crb_nc(inputs: &CrbInputs) -> Result<CrbResult, CrbError> {
    let d = steering_derivatives(&inputs.cfg, &inputs.sources);
    crb_from_derivatives(inputs, &d)
}

/// Same bound with a caller-supplied derivative matrix in the layout of
/// [`steering_derivatives`].
pub fn crb_from_derivatives(inputs: &CrbInputs, d: &CMatrix) -> Result<CrbResult, CrbError> {
    let sigma2 = inputs.noise_var;
    if !(sigma2.is_finite() && sigma2 > 0.0) {
        return Err(CrbError::NoiseVariance(sigma2));
    }
    let l = inputs.sources.len();
    for c in [&inputs.source_cov, &inputs.pseudo_cov] {
        if c.dim() != (l, l) {
            return Err(CrbError::SourceCovariance {
                expected: l,
                rows: c.nrows(),
                cols: c.ncols(),
            });
        }
    }
    for (i, s) in inputs.sources.iter().enumerate() {
        s.validate(i)?;
    }
    let a = manifold_lv(&inputs.cfg, &inputs.sources);
    let m2 = a.nrows();
    let proj = orthogonal_projector(&a).map_err(rank_error)?;

    let ac = a.mapv(|z| z.conj());
    let mut a_aug = Array2::zeros((2 * m2, 2 * l));
    a_aug.slice_mut(s![..m2, ..l]).assign(&a);
    a_aug.slice_mut(s![m2.., l..]).assign(&ac);
    let rs = &inputs.source_cov;
    let rp = &inputs.pseudo_cov;
    let rp_conj = rp.mapv(|z| z.conj());
    let mut rs_aug = Array2::zeros((2 * l, 2 * l));
    rs_aug.slice_mut(s![..l, ..l]).assign(rs);
    rs_aug.slice_mut(s![..l, l..]).assign(rp);
    rs_aug.slice_mut(s![l.., ..l]).assign(&rp_conj);
    rs_aug.slice_mut(s![l.., l..]).assign(&rs.mapv(|z| z.conj()));
    let mut rx = a_aug.dot(&rs_aug).dot(&conj_transpose(&a_aug));
    for i in 0..2 * m2 {
        rx[[i, i]] += sigma2;
    }

    let mut right = Array2::zeros((2 * m2, l));
    right.slice_mut(s![..m2, ..]).assign(&a.dot(rs));
    right.slice_mut(s![m2.., ..]).assign(&ac.dot(&rp_conj));
    let solved = solve_hpd(&rx, &right)?;
    let g = conj_transpose(&right).dot(&solved);

    let dpd = conj_transpose(d).dot(&proj).dot(d);
    let n = 4 * l;
    let mut fisher = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            fisher[[i, j]] = (dpd[[i, j]] * g[[j % l, i % l]]).re;
        }
    }
    for i in 0..n {
        for j in 0..i {
            let s = 0.5 * (fisher[[i, j]] + fisher[[j, i]]);
            fisher[[i, j]] = s;
            fisher[[j, i]] = s;
        }
    }
    check_identifiable(&fisher, l)?;
    let inv = inverse_spd(&fisher).map_err(|_| CrbError::SingularFisher {
        params: (0..n).map(|i| param_name(i, l)).collect(),
    })?;
    let scale = 0.5 * sigma2 / inputs.snapshots.max(1) as f64;
    let covariance = inv.mapv(|x| x * scale);

    let ev = eigh(&rx)?.values;
    let condition_number = ev[0] / ev[ev.len() - 1];
    Ok(CrbResult {
        covariance,
        condition_number,
    })
}

fn rank_error(e: LinalgError) -> CrbError {
    match e {
        LinalgError::NotPositiveDefinite { .. } => CrbError::RankDeficient,
        other => CrbError::Linalg(other),
    }
}

fn param_name(i: usize, l: usize) -> String {
    format!("{}[{}]", PARAM_NAMES[i / l], i % l)
}

fn check_identifiable(fisher: &RMatrix, l: usize) -> Result<(), CrbError> {
    let eig = eigh(&fisher.mapv(|x| Complex64::new(x, 0.0)))?;
    let top = eig.values[0].abs().max(f64::MIN_POSITIVE);
    let mut params = Vec::new();
    for (k, &v) in eig.values.iter().enumerate() {
        if v <= 1e-12 * top {
            for i in 0..fisher.nrows() {
                if eig.vectors[[i, k]].norm() > 0.3 {
                    let name = param_name(i, l);
                    if !params.contains(&name) {
                        params.push(name);
                    }
                }
            }
        }
    }
    if params.is_empty() {
        Ok(())
    } else {
        Err(CrbError::SingularFisher { params })
    }
}

/// ML noise variance `Tr(P⊥_Ā R̂) / (2M - L)` given parameter estimates.
pub fn sigma_ml(snapshots: &SnapshotSet, cfg: &ArrayConfig, estimates: &[SourceParams]) -> Result<f64, CrbError> {
    let r = sample_cov_lv(snapshots).map_err(|_| CrbError::Model(crate::error::ModelError::NoSnapshots))?;
    let m2 = 2 * cfg.elements();
    if r.nrows() != m2 {
        return Err(CrbError::Linalg(LinalgError::DimensionMismatch {
            expected: m2,
            found: r.nrows(),
        }));
    }
    let l = estimates.len();
    if l >= m2 {
        return Err(CrbError::RankDeficient);
    }
    let trace = if l == 0 {
        (0..m2).map(|i| r[[i, i]].re).sum::<f64>()
    } else {
        let proj = orthogonal_projector(&manifold_lv(cfg, estimates)).map_err(rank_error)?;
        proj.dot(&r).diag().iter().map(|z| z.re).sum::<f64>()
    };
    Ok(trace / (m2 - l) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_noise_variance() {
        let cfg = ArrayConfig::half_wavelength(2, 2).unwrap();
        let src = [SourceParams::from_degrees(30.0, 40.0, 45.0, 90.0)];
        let inp = CrbInputs::from_scene(&cfg, &src, SignalKind::NonCircularBpsk, 0.0, 100);
        assert!(matches!(crb_nc(&inp), Err(CrbError::NoiseVariance(_))));
    }

    #[test]
    fn repeated_source_is_rank_deficient() {
        let cfg = ArrayConfig::half_wavelength(2, 2).unwrap();
        let s = SourceParams::from_degrees(30.0, 40.0, 45.0, 90.0);
        let inp = CrbInputs::from_scene(&cfg, &[s, s], SignalKind::NonCircularBpsk, 0.1, 100);
        assert!(matches!(crb_nc(&inp), Err(CrbError::RankDeficient)));
    }

    #[test]
    fn bound_scales_inversely_with_snapshots() {
        let cfg = ArrayConfig::half_wavelength(2, 2).unwrap();
        let src = [SourceParams::from_degrees(30.0, 40.0, 45.0, 90.0)];
        let a = crb_nc(&CrbInputs::from_scene(&cfg, &src, SignalKind::NonCircularBpsk, 0.1, 100)).unwrap();
        let b = crb_nc(&CrbInputs::from_scene(&cfg, &src, SignalKind::NonCircularBpsk, 0.1, 400)).unwrap();
        for i in 0..4 {
            assert!((a.covariance[[i, i]] / b.covariance[[i, i]] - 4.0).abs() < 1e-9);
        }
    }
}
