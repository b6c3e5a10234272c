//! Uniform rectangular array of co-located crossed dipoles.
//!
//! Element `m = my·Mx + mx` (zero-based) sits at `(mx·d, my·d)`. Each element
//! has an x-oriented and a y-oriented dipole, so a snapshot consists of two
//! M-vectors `x1` (x-dipoles) and `x2` (y-dipoles). Angles are radians:
//! azimuth `theta ∈ [0, π)`, elevation `phi ∈ [0, π/2)`, auxiliary
//! polarization angle `gamma ∈ [0, π/2)`, phase difference `eta ∈ [0, 2π)`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use ndarray::{s, Array1, Array2};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::ModelError;
use crate::linalg::{conj_transpose, CMatrix, CVector};
use crate::qmatrix::QMatrix;

const C0: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayConfig {
    pub mx: usize,
    pub my: usize,
    /// Inter-element spacing in wavelengths.
    pub spacing: f64,
}

impl ArrayConfig {
    pub fn new(mx: usize, my: usize, spacing: f64) -> Result<Self, ModelError> {
        if mx == 0 || my == 0 {
            return Err(ModelError::EmptyArray { mx, my });
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(ModelError::Spacing(spacing));
        }
        Ok(Self { mx, my, spacing })
    }

    /// Half-wavelength spacing.
    pub fn half_wavelength(mx: usize, my: usize) -> Result<Self, ModelError> {
        Self::new(mx, my, 0.5)
    }

    pub fn elements(&self) -> usize {
        self.mx * self.my
    }

    pub(crate) fn wavenumber_spacing(&self) -> f64 {
        TAU * self.spacing
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceParams {
    pub theta: f64,
    pub phi: f64,
    pub gamma: f64,
    pub eta: f64,
    pub power: f64,
    /// Non-circularity rate `|E[s²]| / E|s|²`, used by the partially
    /// non-circular model.
    pub nc_rate: f64,
    /// Non-circularity phase: `E[s²] = nc_rate·power·e^{i nc_phase}`.
    pub nc_phase: f64,
}

impl SourceParams {
    /// Unit-power rectilinear source; angles in degrees.
    pub fn from_degrees(theta: f64, phi: f64, gamma: f64, eta: f64) -> Self {
        Self {
            theta: theta.to_radians(),
            phi: phi.to_radians(),
            gamma: gamma.to_radians(),
            eta: eta.to_radians(),
            power: 1.0,
            nc_rate: 1.0,
            nc_phase: 0.0,
        }
    }

    pub fn validate(&self, index: usize) -> Result<(), ModelError> {
        let check = |field: &'static str, value: f64, lo: f64, hi: f64, range: &'static str| {
            if value.is_finite() && value >= lo && value < hi {
                Ok(())
            } else {
                Err(ModelError::SourceParam {
                    index,
                    field,
                    value,
                    range,
                })
            }
        };
        check("theta", self.theta, 0.0, PI, "[0, pi)")?;
        check("phi", self.phi, 0.0, FRAC_PI_2, "[0, pi/2)")?;
        check("gamma", self.gamma, 0.0, FRAC_PI_2, "[0, pi/2)")?;
        check("eta", self.eta, 0.0, TAU, "[0, 2pi)")?;
        check("power", self.power, f64::MIN_POSITIVE, f64::INFINITY, "(0, inf)")?;
        if !(self.nc_rate.is_finite() && (0.0..=1.0).contains(&self.nc_rate)) {
            return Err(ModelError::SourceParam {
                index,
                field: "nc_rate",
                value: self.nc_rate,
                range: "[0, 1]",
            });
        }
        if !self.nc_phase.is_finite() {
            return Err(ModelError::SourceParam {
                index,
                field: "nc_phase",
                value: self.nc_phase,
                range: "finite",
            });
        }
        Ok(())
    }
}

/// The scenario used throughout the examples and benchmarks: three
/// unit-power BPSK sources.
pub fn scenario_one() -> Vec<SourceParams> {
    vec![
        SourceParams::from_degrees(20.0, 10.0, 40.0, 20.0),
        SourceParams::from_degrees(75.0, 15.0, 70.0, 40.0),
        SourceParams::from_degrees(115.0, 20.0, 25.0, 30.0),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignalKind {
    NonCircularBpsk,
    CircularGaussian,
    /// Mixture with per-source rate `SourceParams::nc_rate`.
    PartiallyNonCircular,
}

impl SignalKind {
    pub fn nc_rate(self, source: &SourceParams) -> f64 {
        match self {
            Self::NonCircularBpsk => 1.0,
            Self::CircularGaussian => 0.0,
            Self::PartiallyNonCircular => source.nc_rate,
        }
    }
}

/// Complex response `[ξ1, ξ2]` of the x- and y-dipoles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationResponse {
    pub xi1: Complex64,
    pub xi2: Complex64,
}

impl PolarizationResponse {
    pub fn norm_sqr(&self) -> f64 {
        self.xi1.norm_sqr() + self.xi2.norm_sqr()
    }
}

/// Spatial steering vector, unit-modulus entries.
pub fn steering_vector(cfg: &ArrayConfig, theta: f64, phi: f64) -> CVector {
    let mut a = Array1::from_elem(cfg.elements(), C0);
    steering_vector_into(cfg, theta, phi, a.as_slice_mut().expect("contiguous"));
    a
}

pub(crate) fn steering_vector_into(cfg: &ArrayConfig, theta: f64, phi: f64, out: &mut [Complex64]) {
    let k = cfg.wavenumber_spacing() * phi.sin();
    let (sy, cx) = theta.sin_cos();
    let px: Vec<Complex64> = (0..cfg.mx).map(|m| Complex64::from_polar(1.0, k * cx * m as f64)).collect();
    for my in 0..cfg.my {
        let py = Complex64::from_polar(1.0, k * sy * my as f64);
        for (mx, pxm) in px.iter().enumerate() {
            out[my * cfg.mx + mx] = py * pxm;
        }
    }
}

pub fn polarization_response(theta: f64, phi: f64, gamma: f64, eta: f64) -> PolarizationResponse {
    let (st, ct) = theta.sin_cos();
    let cp = phi.cos();
    let h = Complex64::from_polar(gamma.sin(), eta);
    let v = gamma.cos();
    PolarizationResponse {
        xi1: h * (ct * cp) - v * st,
        xi2: h * (st * cp) + v * ct,
    }
}

/// Long-vector manifold `[a·ξ1; a·ξ2]`, one column per source (2M × L).
pub fn manifold_lv(cfg: &ArrayConfig, sources: &[SourceParams]) -> CMatrix {
    let m = cfg.elements();
    let mut out = Array2::zeros((2 * m, sources.len()));
    for (l, src) in sources.iter().enumerate() {
        let a = steering_vector(cfg, src.theta, src.phi);
        let xi = polarization_response(src.theta, src.phi, src.gamma, src.eta);
        for i in 0..m {
            out[[i, l]] = a[i] * xi.xi1;
            out[[m + i, l]] = a[i] * xi.xi2;
        }
    }
    out
}

/// Received data of both dipole sets, `M × N` each.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotSet {
    pub x1: CMatrix,
    pub x2: CMatrix,
}

impl SnapshotSet {
    pub fn new(x1: CMatrix, x2: CMatrix) -> Result<Self, ModelError> {
        if x1.dim() != x2.dim() {
            return Err(ModelError::ShapeMismatch);
        }
        if x1.ncols() == 0 {
            return Err(ModelError::NoSnapshots);
        }
        Ok(Self { x1, x2 })
    }

    pub fn elements(&self) -> usize {
        self.x1.nrows()
    }

    pub fn snapshots(&self) -> usize {
        self.x1.ncols()
    }

    /// Long vector `[x1; x2]` (2M × N).
    pub fn long_vector(&self) -> CMatrix {
        ndarray::concatenate(ndarray::Axis(0), &[self.x1.view(), self.x2.view()]).expect("shapes agree")
    }
}

/// Per-entry complex noise variance for `snr_db` relative to the mean source
/// power. `+inf` gives zero noise.
pub fn noise_variance(sources: &[SourceParams], snr_db: f64) -> Result<f64, ModelError> {
    if snr_db.is_nan() || snr_db == f64::NEG_INFINITY {
        return Err(ModelError::Snr);
    }
    let power = if sources.is_empty() {
        1.0
    } else {
        sources.iter().map(|s| s.power).sum::<f64>() / sources.len() as f64
    };
    Ok(power * 10f64.powf(-snr_db / 10.0))
}

fn validate_scene(cfg: &ArrayConfig, sources: &[SourceParams]) -> Result<(), ModelError> {
    for (i, s) in sources.iter().enumerate() {
        s.validate(i)?;
    }
    let m = cfg.elements();
    if sources.len() >= m {
        return Err(ModelError::TooManySources {
            sources: sources.len(),
            elements: m,
            needed: sources.len() + 1,
        });
    }
    Ok(())
}

fn complex_gaussian(rng: &mut impl Rng, variance: f64) -> Complex64 {
    let sd = (0.5 * variance).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * sd, im * sd)
}

/// Draws `n` snapshots. All randomness comes from `seed`: the source
/// waveforms are drawn first (source by source), then the x-dipole noise,
/// then the y-dipole noise.
pub fn synthesize_snapshots(
    cfg: &ArrayConfig,
    sources: &[SourceParams],
    n: usize,
    snr_db: f64,
    seed: u64,
    kind: SignalKind,
) -> Result<SnapshotSet, ModelError> {
    validate_scene(cfg, sources)?;
    if n == 0 {
        return Err(ModelError::NoSnapshots);
    }
    let sigma2 = noise_variance(sources, snr_db)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let l = sources.len();
    let m = cfg.elements();

    let mut wave = Array2::<Complex64>::zeros((l, n));
    for (k, src) in sources.iter().enumerate() {
        let mu = kind.nc_rate(src);
        let rot = Complex64::from_polar(1.0, 0.5 * src.nc_phase);
        for t in 0..n {
            let mut s = C0;
            if mu > 0.0 {
                let b = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                s += rot * (b * mu.sqrt());
            }
            if mu < 1.0 {
                s += complex_gaussian(&mut rng, 1.0 - mu);
            }
            wave[[k, t]] = s * src.power.sqrt();
        }
    }

    let manifold = manifold_lv(cfg, sources);
    let clean = manifold.dot(&wave);
    let mut x1 = clean.slice(s![..m, ..]).to_owned();
    let mut x2 = clean.slice(s![m.., ..]).to_owned();
    if sigma2 > 0.0 {
        for x in [&mut x1, &mut x2] {
            for z in x.iter_mut() {
                *z += complex_gaussian(&mut rng, sigma2);
            }
        }
    }
    SnapshotSet::new(x1, x2)
}

/// Exact second-order statistics of the long vector `x̄ = [x1; x2]`.
#[derive(Debug, Clone)]
pub struct AugmentedCovariance {
    /// `E[x̄ x̄^H]`.
    pub cov: CMatrix,
    /// `E[x̄ x̄^T]`.
    pub pseudo: CMatrix,
}

impl AugmentedCovariance {
    pub fn new(
        cfg: &ArrayConfig,
        sources: &[SourceParams],
        noise_var: f64,
        kind: SignalKind,
    ) -> Result<Self, ModelError> {
        validate_scene(cfg, sources)?;
        let a = manifold_lv(cfg, sources);
        let l = sources.len();
        let mut rs = Array2::<Complex64>::zeros((l, l));
        let mut rp = Array2::<Complex64>::zeros((l, l));
        for (k, src) in sources.iter().enumerate() {
            rs[[k, k]] = Complex64::new(src.power, 0.0);
            rp[[k, k]] = Complex64::from_polar(kind.nc_rate(src) * src.power, src.nc_phase);
        }
        let mut cov = a.dot(&rs).dot(&conj_transpose(&a));
        for i in 0..cov.nrows() {
            cov[[i, i]] += noise_var;
        }
        let pseudo = a.dot(&rp).dot(&a.t());
        Ok(Self { cov, pseudo })
    }

    /// `E[y z^H]` for `y = S_y [x̄; x̄*]`, `z = S_z [x̄; x̄*]` where each row of
    /// a selector is `(index into [x̄; x̄*], sign)`.
    fn cross(&self, rows: &[(usize, f64)], cols: &[(usize, f64)]) -> CMatrix {
        let n = self.cov.nrows();
        let entry = |i: usize, j: usize| -> Complex64 {
            match (i < n, j < n) {
                (true, true) => self.cov[[i, j]],
                (true, false) => self.pseudo[[i, j - n]],
                (false, true) => self.pseudo[[i - n, j]].conj(),
                (false, false) => self.cov[[i - n, j - n]].conj(),
            }
        };
        Array2::from_shape_fn((rows.len(), cols.len()), |(r, c)| {
            let (i, si) = rows[r];
            let (j, sj) = cols[c];
            entry(i, j) * (si * sj)
        })
    }
}

/// Exact long-vector covariance `E[x̄ x̄^H]`.
pub fn analytic_covariance_lv(
    cfg: &ArrayConfig,
    sources: &[SourceParams],
    noise_var: f64,
    kind: SignalKind,
) -> Result<CMatrix, ModelError> {
    Ok(AugmentedCovariance::new(cfg, sources, noise_var, kind)?.cov)
}

/// Exact quaternion covariance `E[x x^‡]` for `x = x1 + x2·j2`.
pub fn analytic_covariance_q(
    cfg: &ArrayConfig,
    sources: &[SourceParams],
    noise_var: f64,
    kind: SignalKind,
) -> Result<QMatrix, ModelError> {
    let aug = AugmentedCovariance::new(cfg, sources, noise_var, kind)?;
    let m = cfg.elements();
    // First adjoint column of x is [x1; -conj(x2)], i.e. entries of [x̄; x̄*].
    let sel: Vec<(usize, f64)> = (0..m).map(|i| (i, 1.0)).chain((0..m).map(|i| (3 * m + i, -1.0))).collect();
    let sel2: Vec<(usize, f64)> = (0..m).map(|i| (m + i, 1.0)).chain((0..m).map(|i| (2 * m + i, 1.0))).collect();
    let chi = aug.cross(&sel, &sel) + aug.cross(&sel2, &sel2);
    Ok(QMatrix::from_adjoint(&chi, 1e-9).expect("covariance of a quaternion vector has adjoint structure"))
}

/// Exact covariance `E[w w^‡]` of the non-circular extended vector
/// `w = [x1; x1*] + [x2; x2*]·j2`.
pub fn analytic_covariance_nc(
    cfg: &ArrayConfig,
    sources: &[SourceParams],
    noise_var: f64,
    kind: SignalKind,
) -> Result<QMatrix, ModelError> {
    let aug = AugmentedCovariance::new(cfg, sources, noise_var, kind)?;
    let m = cfg.elements();
    // Indices into [x̄; x̄*] = [x1; x2; x1*; x2*].
    let x1 = |i: usize| i;
    let x2 = |i: usize| m + i;
    let x1c = |i: usize| 2 * m + i;
    let x2c = |i: usize| 3 * m + i;
    // Adjoint columns of w: [w1; -conj(w2)] and [w2; conj(w1)].
    let first: Vec<(usize, f64)> = (0..m)
        .map(|i| (x1(i), 1.0))
        .chain((0..m).map(|i| (x1c(i), 1.0)))
        .chain((0..m).map(|i| (x2c(i), -1.0)))
        .chain((0..m).map(|i| (x2(i), -1.0)))
        .collect();
    let second: Vec<(usize, f64)> = (0..m)
        .map(|i| (x2(i), 1.0))
        .chain((0..m).map(|i| (x2c(i), 1.0)))
        .chain((0..m).map(|i| (x1c(i), 1.0)))
        .chain((0..m).map(|i| (x1(i), 1.0)))
        .collect();
    let chi = aug.cross(&first, &first) + aug.cross(&second, &second);
    Ok(QMatrix::from_adjoint(&chi, 1e-9).expect("covariance of a quaternion vector has adjoint structure"))
}

/// Quaternion snapshots `X = X1 + X2·j2` (M × N).
pub fn build_quaternion_snapshots(s: &SnapshotSet) -> QMatrix {
    QMatrix {
        p1: s.x1.clone(),
        p2: s.x2.clone(),
    }
}

/// Non-circular extended quaternion snapshots `[X1; X1*] + [X2; X2*]·j2`
/// (2M × N).
pub fn build_nc_extended(s: &SnapshotSet) -> QMatrix {
    let stack = |x: &CMatrix| {
        let xc = x.mapv(|z| z.conj());
        ndarray::concatenate(ndarray::Axis(0), &[x.view(), xc.view()]).expect("shapes agree")
    };
    QMatrix {
        p1: stack(&s.x1),
        p2: stack(&s.x2),
    }
}
