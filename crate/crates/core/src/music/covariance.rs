use crate::error::{ModelError, MusicError};
use crate::linalg::{conj_transpose, CMatrix};
use crate::qmatrix::QMatrix;
use crate::signal::{
    analytic_covariance_lv, analytic_covariance_nc, analytic_covariance_q, build_nc_extended,
    build_quaternion_snapshots, ArrayConfig, SignalKind, SnapshotSet, SourceParams,
};

/// Long-vector sample covariance `x̄ x̄^H / N` (2M × 2M).
pub fn sample_cov_lv(s: &SnapshotSet) -> Result<CMatrix, MusicError> {
    let n = s.snapshots();
    if n == 0 {
        return Err(MusicError::NoSnapshots);
    }
    let x = s.long_vector();
    Ok(x.dot(&conj_transpose(&x)).mapv(|z| z / n as f64))
}

/// Quaternion sample covariance `X X^‡ / N`.
///
/// With `X = X1 + X2·j2` the parts are `(X1 X1^H + X2 X2^H)/N` and
/// `(X2 X1^T - X1 X2^T)/N`.
pub fn sample_cov_q(x: &QMatrix) -> Result<QMatrix, MusicError> {
    let n = x.cols();
    if n == 0 {
        return Err(MusicError::NoSnapshots);
    }
    let inv = 1.0 / n as f64;
    let p1 = (x.p1.dot(&conj_transpose(&x.p1)) + x.p2.dot(&conj_transpose(&x.p2))).mapv(|z| z * inv);
    let p2 = (x.p2.dot(&x.p1.t()) - x.p1.dot(&x.p2.t())).mapv(|z| z * inv);
    Ok(QMatrix { p1, p2 })
}

/// Sample covariance of the non-circular extended snapshots (2M × 2M).
pub fn sample_cov_nc(w: &QMatrix) -> Result<QMatrix, MusicError> {
    sample_cov_q(w)
}

/// The three covariances the estimators work from.
#[derive(Debug, Clone)]
pub struct Covariances {
    pub lv: CMatrix,
    pub q: QMatrix,
    pub nc: QMatrix,
}

impl Covariances {
    pub fn from_snapshots(s: &SnapshotSet) -> Result<Self, MusicError> {
        Ok(Self {
            lv: sample_cov_lv(s)?,
            q: sample_cov_q(&build_quaternion_snapshots(s))?,
            nc: sample_cov_nc(&build_nc_extended(s))?,
        })
    }

    /// Exact (infinite-snapshot) covariances.
    pub fn analytic(
        cfg: &ArrayConfig,
        sources: &[SourceParams],
        noise_var: f64,
        kind: SignalKind,
    ) -> Result<Self, ModelError> {
        Ok(Self {
            lv: analytic_covariance_lv(cfg, sources, noise_var, kind)?,
            q: analytic_covariance_q(cfg, sources, noise_var, kind)?,
            nc: analytic_covariance_nc(cfg, sources, noise_var, kind)?,
        })
    }
}
