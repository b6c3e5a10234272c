//! Monte-Carlo sweeps over array size, SNR and snapshot count.
//!
//! Trial `t` of every sweep point draws its data from seed `seed ^ t`, and
//! results are merged in trial order, so the output does not depend on the
//! number of workers.

use std::fs;
use std::path::{Path, PathBuf};

use ncmusic_core::crb::{crb_nc, CrbInputs};
use ncmusic_core::music::{estimate_from_covariances, Covariances};
use ncmusic_core::signal::{noise_variance, synthesize_snapshots};
use ncmusic_core::{Algorithm, ArrayConfig, ModelError, MusicError, SourceEstimate};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::config::SweepConfig;
use crate::metrics::{match_estimates, parameter_errors, ErrorAccumulator, RmseRecord};

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("data synthesis failed: {0}")]
    Model(#[from] ModelError),
    #[error("covariance estimation failed: {0}")]
    Covariance(#[from] MusicError),
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
    #[error("cannot write {path}: {message}")]
    Output { path: PathBuf, message: String },
}

/// One source of one trial; angles in degrees, estimates empty when the
/// trial failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRow {
    pub algorithm: String,
    pub mx: usize,
    pub my: usize,
    pub snr_db: f64,
    pub snapshots: usize,
    pub trial: usize,
    pub source_idx: usize,
    pub theta_true: f64,
    pub phi_true: f64,
    pub gamma_true: f64,
    pub eta_true: f64,
    pub theta_est: Option<f64>,
    pub phi_est: Option<f64>,
    pub gamma_est: Option<f64>,
    pub eta_est: Option<f64>,
    pub matched: bool,
}

#[derive(Debug, Clone, Default)]
pub struct SweepReport {
    pub trials: Vec<TrialRow>,
    pub records: Vec<RmseRecord>,
}

/// Matched estimates per algorithm for one trial, `None` on failure.
type TrialOutcome = Vec<Option<Vec<SourceEstimate>>>;

fn run_trial(
    cfg: &SweepConfig,
    array: &ArrayConfig,
    snr_db: f64,
    snapshots: usize,
    trial: usize,
) -> Result<TrialOutcome, SweepError> {
    let data = synthesize_snapshots(
        array,
        &cfg.sources,
        snapshots,
        snr_db,
        cfg.seed ^ trial as u64,
        cfg.signal,
    )?;
    let cov = Covariances::from_snapshots(&data)?;
    Ok(cfg
        .algorithms
        .iter()
        .map(|&alg| {
            let result = estimate_from_covariances(alg, &cov, array, cfg.sources.len(), &cfg.grid);
            match result {
                Ok(r) => match_estimates(&cfg.sources, &r.estimates)
                    .map(|assign| assign.into_iter().map(|j| r.estimates[j]).collect()),
                Err(e) => {
                    log::debug!("{alg} trial {trial}: {e}");
                    None
                }
            }
        })
        .collect())
}

fn crb_columns(cfg: &SweepConfig, array: &ArrayConfig, snr_db: f64, snapshots: usize) -> [Option<f64>; 4] {
    if !cfg.crb {
        return [None; 4];
    }
    let bound = noise_variance(&cfg.sources, snr_db)
        .map_err(|e| e.to_string())
        .and_then(|nv| {
            crb_nc(&CrbInputs::from_scene(array, &cfg.sources, cfg.signal, nv, snapshots)).map_err(|e| e.to_string())
        });
    match bound {
        Ok(b) => {
            let mut out = [None; 4];
            for (p, slot) in out.iter_mut().enumerate() {
                let sd = b.std_devs(p);
                let ms = sd.iter().map(|x| x * x).sum::<f64>() / sd.len() as f64;
                *slot = Some(ms.sqrt().to_degrees());
            }
            out
        }
        Err(e) => {
            log::warn!("no CRB for {}x{} at {snr_db} dB: {e}", array.mx, array.my);
            [None; 4]
        }
    }
}

/// Runs the sweep on `workers` threads.
pub fn run_sweep(cfg: &SweepConfig, workers: usize) -> Result<SweepReport, SweepError> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build()?;
    let mut report = SweepReport::default();
    let l = cfg.sources.len();
    for array in &cfg.arrays {
        for &snr_db in &cfg.snr_db {
            for &snapshots in &cfg.snapshots {
                let outcomes: Vec<TrialOutcome> = pool.install(|| {
                    (0..cfg.trials)
                        .into_par_iter()
                        .map(|t| run_trial(cfg, array, snr_db, snapshots, t))
                        .collect::<Result<Vec<_>, _>>()
                })?;
                let crb = crb_columns(cfg, array, snr_db, snapshots);
                for (ai, alg) in cfg.algorithms.iter().enumerate() {
                    let mut acc = ErrorAccumulator::default();
                    for (t, outcome) in outcomes.iter().enumerate() {
                        let matched = outcome[ai].as_ref();
                        let errors: Option<Vec<[f64; 4]>> = matched.map(|est| {
                            cfg.sources.iter().zip(est).map(|(s, e)| parameter_errors(s, e)).collect()
                        });
                        acc.add_trial(errors.as_deref());
                        for k in 0..l {
                            report.trials.push(trial_row(*alg, array, snr_db, snapshots, t, k, cfg, matched));
                        }
                    }
                    let r = acc.rmse_deg();
                    report.records.push(RmseRecord {
                        algorithm: alg.name().to_owned(),
                        mx: array.mx,
                        my: array.my,
                        snr_db,
                        snapshots,
                        trials_used: acc.trials_used,
                        failures: acc.failures,
                        rmse_theta: r[0],
                        rmse_phi: r[1],
                        rmse_gamma: r[2],
                        rmse_eta: r[3],
                        crb_theta: crb[0],
                        crb_phi: crb[1],
                        crb_gamma: crb[2],
                        crb_eta: crb[3],
                    });
                }
            }
        }
    }
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
fn trial_row(
    alg: Algorithm,
    array: &ArrayConfig,
    snr_db: f64,
    snapshots: usize,
    trial: usize,
    k: usize,
    cfg: &SweepConfig,
    matched: Option<&Vec<SourceEstimate>>,
) -> TrialRow {
    let s = &cfg.sources[k];
    let e = matched.map(|m| m[k]);
    TrialRow {
        algorithm: alg.name().to_owned(),
        mx: array.mx,
        my: array.my,
        snr_db,
        snapshots,
        trial,
        source_idx: k,
        theta_true: s.theta.to_degrees(),
        phi_true: s.phi.to_degrees(),
        gamma_true: s.gamma.to_degrees(),
        eta_true: s.eta.to_degrees(),
        theta_est: e.map(|e| e.theta.to_degrees()),
        phi_est: e.map(|e| e.phi.to_degrees()),
        gamma_est: e.map(|e| e.gamma.to_degrees()),
        eta_est: e.map(|e| e.eta.to_degrees()),
        matched: e.is_some(),
    }
}

pub const TRIALS_FILE: &str = "trials.csv";
pub const SUMMARY_FILE: &str = "summary.csv";

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), SweepError> {
    let out = |e: &dyn std::fmt::Display| SweepError::Output {
        path: path.to_owned(),
        message: e.to_string(),
    };
    let mut w = csv::Writer::from_path(path).map_err(|e| out(&e))?;
    for r in rows {
        w.serialize(r).map_err(|e| out(&e))?;
    }
    w.flush().map_err(|e| out(&e))
}

/// Writes `trials.csv` and `summary.csv` into `dir`, creating it.
pub fn write_report(report: &SweepReport, dir: &Path) -> Result<(PathBuf, PathBuf), SweepError> {
    fs::create_dir_all(dir).map_err(|e| SweepError::Output {
        path: dir.to_owned(),
        message: e.to_string(),
    })?;
    let trials = dir.join(TRIALS_FILE);
    let summary = dir.join(SUMMARY_FILE);
    write_csv(&trials, &report.trials)?;
    write_csv(&summary, &report.records)?;
    Ok((trials, summary))
}
