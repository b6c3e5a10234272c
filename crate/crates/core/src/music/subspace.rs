use ndarray::s;

use crate::error::MusicError;
use crate::linalg::{eigh, CMatrix};
use crate::qmatrix::{qevd_self_conjugated, QMatrix};
use crate::signal::ArrayConfig;

/// Signal and noise bases of the long-vector covariance, split into the
/// x-dipole (`*1`) and y-dipole (`*2`) halves.
#[derive(Debug, Clone)]
pub struct LvSubspaces {
    pub cfg: ArrayConfig,
    pub us1: CMatrix,
    pub us2: CMatrix,
    pub un1: CMatrix,
    pub un2: CMatrix,
    pub values: Vec<f64>,
}

impl LvSubspaces {
    /// Noise basis as one 2M × (2M - L) matrix.
    pub fn noise(&self) -> CMatrix {
        ndarray::concatenate(ndarray::Axis(0), &[self.un1.view(), self.un2.view()]).expect("shapes agree")
    }
}

#[derive(Debug, Clone)]
pub struct QSubspaces {
    pub cfg: ArrayConfig,
    pub signal: QMatrix,
    pub noise: QMatrix,
    pub values: Vec<f64>,
}

/// Bases of the extended covariance; `top` rows pair with the steering
/// vector, `bottom` rows with its conjugate.
#[derive(Debug, Clone)]
pub struct NcSubspaces {
    pub cfg: ArrayConfig,
    pub signal_top: QMatrix,
    pub signal_bottom: QMatrix,
    pub noise_top: QMatrix,
    pub noise_bottom: QMatrix,
    pub values: Vec<f64>,
}

fn check(dim: usize, expected: usize, sources: usize) -> Result<(), MusicError> {
    if dim != expected {
        return Err(MusicError::Dimension { expected, found: dim });
    }
    if sources >= dim {
        return Err(MusicError::NoNoiseSubspace { sources, dim });
    }
    Ok(())
}

pub fn noise_subspace_lv(r: &CMatrix, sources: usize, cfg: &ArrayConfig) -> Result<LvSubspaces, MusicError> {
    let m = cfg.elements();
    check(r.nrows(), 2 * m, sources)?;
    let eig = eigh(r)?;
    let v = eig.vectors;
    Ok(LvSubspaces {
        cfg: *cfg,
        us1: v.slice(s![..m, ..sources]).to_owned(),
        us2: v.slice(s![m.., ..sources]).to_owned(),
        un1: v.slice(s![..m, sources..]).to_owned(),
        un2: v.slice(s![m.., sources..]).to_owned(),
        values: eig.values,
    })
}

pub fn noise_subspace_q(r: &QMatrix, sources: usize, cfg: &ArrayConfig) -> Result<QSubspaces, MusicError> {
    let m = cfg.elements();
    check(r.rows(), m, sources)?;
    let e = qevd_self_conjugated(r)?;
    Ok(QSubspaces {
        cfg: *cfg,
        signal: e.vectors.columns(0, sources),
        noise: e.vectors.columns(sources, m),
        values: e.values,
    })
}

pub fn noise_subspace_nc(r: &QMatrix, sources: usize, cfg: &ArrayConfig) -> Result<NcSubspaces, MusicError> {
    let m = cfg.elements();
    check(r.rows(), 2 * m, sources)?;
    let e = qevd_self_conjugated(r)?;
    let signal = e.vectors.columns(0, sources);
    let noise = e.vectors.columns(sources, 2 * m);
    Ok(NcSubspaces {
        cfg: *cfg,
        signal_top: signal.row_block(0, m),
        signal_bottom: signal.row_block(m, 2 * m),
        noise_top: noise.row_block(0, m),
        noise_bottom: noise.row_block(m, 2 * m),
        values: e.values,
    })
}
