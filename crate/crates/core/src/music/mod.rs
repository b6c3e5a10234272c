//! Subspace estimators of DOA and polarization.
//!
//! * `Qdr`: quaternion MUSIC for DOA, then a polarization search on the
//!   long-vector noise subspace.
//! * `Dr`: long-vector MUSIC with the polarization eliminated analytically,
//!   then closed-form polarization.
//! * `Qnc`: quaternion MUSIC on the non-circular extended snapshots, then
//!   closed-form polarization.

mod covariance;
mod search;
mod spectrum;
mod subspace;

use std::fmt;
use std::str::FromStr;

pub use covariance::{sample_cov_lv, sample_cov_nc, sample_cov_q, Covariances};
pub use search::{grid_search_peaks, search_polarization, GridSpec, Peak};
pub use spectrum::{
    dr_terms, polarization_closed_form, polarization_from_ratio, polarization_gram, qnc_terms, spectrum_dr_doa,
    spectrum_lv, spectrum_qdr_doa, spectrum_qdr_pol, spectrum_qnc_doa, DrTerms, QncTerms, DEGENERATE_DENOMINATOR,
};
pub use subspace::{noise_subspace_lv, noise_subspace_nc, noise_subspace_q, LvSubspaces, NcSubspaces, QSubspaces};

use crate::error::MusicError;
use crate::signal::{ArrayConfig, SnapshotSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Qdr,
    Dr,
    Qnc,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Qdr, Algorithm::Dr, Algorithm::Qnc];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Qdr => "QDR",
            Algorithm::Dr => "DR",
            Algorithm::Qnc => "QNC",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "QDR" => Ok(Algorithm::Qdr),
            "DR" => Ok(Algorithm::Dr),
            "QNC" => Ok(Algorithm::Qnc),
            _ => Err(format!("unknown algorithm `{s}` (expected QDR, DR or QNC)")),
        }
    }
}

/// One estimated source; angles in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceEstimate {
    pub theta: f64,
    pub phi: f64,
    pub gamma: f64,
    pub eta: f64,
    /// DOA spectrum value at the estimate.
    pub spectrum: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimationResult {
    pub algorithm: Algorithm,
    /// Deepest minimum first.
    pub estimates: Vec<SourceEstimate>,
}

pub fn estimate(
    algorithm: Algorithm,
    snapshots: &SnapshotSet,
    cfg: &ArrayConfig,
    sources: usize,
    grid: &GridSpec,
) -> Result<EstimationResult, MusicError> {
    if snapshots.elements() != cfg.elements() {
        return Err(MusicError::Dimension {
            expected: cfg.elements(),
            found: snapshots.elements(),
        });
    }
    let cov = Covariances::from_snapshots(snapshots)?;
    estimate_from_covariances(algorithm, &cov, cfg, sources, grid)
}

pub fn estimate_from_covariances(
    algorithm: Algorithm,
    cov: &Covariances,
    cfg: &ArrayConfig,
    sources: usize,
    grid: &GridSpec,
) -> Result<EstimationResult, MusicError> {
    grid.validate()?;
    if sources >= cfg.elements() {
        return Err(MusicError::NoNoiseSubspace {
            sources,
            dim: cfg.elements(),
        });
    }
    let lv = noise_subspace_lv(&cov.lv, sources, cfg)?;
    let estimates = match algorithm {
        Algorithm::Qdr => {
            let q = noise_subspace_q(&cov.q, sources, cfg)?;
            let peaks = grid_search_peaks(|t, p| Some(spectrum_qdr_doa(t, p, &q)), grid, sources)?;
            peaks
                .into_iter()
                .map(|pk| {
                    let g = polarization_gram(&lv, pk.theta, pk.phi);
                    let (gamma, eta, _) = search_polarization(
                        |gm, et| spectrum::polarization_form(&g, pk.theta, pk.phi, gm, et),
                        grid,
                    )?;
                    Ok(with_polarization(pk, gamma, eta))
                })
                .collect::<Result<Vec<_>, MusicError>>()?
        }
        Algorithm::Dr => {
            let peaks = grid_search_peaks(|t, p| spectrum_dr_doa(t, p, &lv), grid, sources)?;
            closed_form_all(peaks, &lv)?
        }
        Algorithm::Qnc => {
            let nc = noise_subspace_nc(&cov.nc, sources, cfg)?;
            let peaks = grid_search_peaks(|t, p| Some(spectrum_qnc_doa(t, p, &nc)), grid, sources)?;
            closed_form_all(peaks, &lv)?
        }
    };
    Ok(EstimationResult { algorithm, estimates })
}

fn with_polarization(pk: Peak, gamma: f64, eta: f64) -> SourceEstimate {
    SourceEstimate {
        theta: pk.theta,
        phi: pk.phi,
        gamma,
        eta,
        spectrum: pk.value,
    }
}

fn closed_form_all(peaks: Vec<Peak>, lv: &LvSubspaces) -> Result<Vec<SourceEstimate>, MusicError> {
    peaks
        .into_iter()
        .map(|pk| {
            let (gamma, eta) = polarization_closed_form(pk.theta, pk.phi, lv)?;
            Ok(with_polarization(pk, gamma, eta))
        })
        .collect()
}
