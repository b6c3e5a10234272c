//! Matching estimates to ground truth and aggregating errors.

use std::f64::consts::{PI, TAU};

use ncmusic_core::{SourceEstimate, SourceParams};
use serde::Serialize;

/// Greedy nearest-neighbour assignment in (θ, φ).
///
/// Returns `assignment[truth] = estimate index`, or `None` when fewer
/// estimates than sources exist. The globally closest pair is fixed first.
pub fn match_estimates(truth: &[SourceParams], estimates: &[SourceEstimate]) -> Option<Vec<usize>> {
    if estimates.len() < truth.len() {
        return None;
    }
    let mut pairs = Vec::with_capacity(truth.len() * estimates.len());
    for (i, t) in truth.iter().enumerate() {
        for (j, e) in estimates.iter().enumerate() {
            pairs.push(((t.theta - e.theta).hypot(t.phi - e.phi), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut assignment = vec![usize::MAX; truth.len()];
    let mut used = vec![false; estimates.len()];
    let mut left = truth.len();
    for (_, i, j) in pairs {
        if left == 0 {
            break;
        }
        if assignment[i] == usize::MAX && !used[j] {
            assignment[i] = j;
            used[j] = true;
            left -= 1;
        }
    }
    Some(assignment)
}

/// Angle difference wrapped to [-π, π).
pub fn wrap_angle(x: f64) -> f64 {
    (x + PI).rem_euclid(TAU) - PI
}

/// Errors `[θ, φ, γ, η]` in radians. `η` is compared modulo 2π.
pub fn parameter_errors(truth: &SourceParams, est: &SourceEstimate) -> [f64; 4] {
    [
        est.theta - truth.theta,
        est.phi - truth.phi,
        est.gamma - truth.gamma,
        wrap_angle(est.eta - truth.eta),
    ]
}

/// Running sum of squared errors for one sweep point and algorithm.
#[derive(Debug, Clone, Default)]
pub struct ErrorAccumulator {
    sum_sq: [f64; 4],
    samples: usize,
    pub trials_used: usize,
    pub failures: usize,
}

impl ErrorAccumulator {
    /// Adds one trial. `None` marks a failed or unmatched trial.
    pub fn add_trial(&mut self, errors: Option<&[[f64; 4]]>) {
        match errors {
            Some(errs) => {
                for e in errs {
                    for k in 0..4 {
                        self.sum_sq[k] += e[k] * e[k];
                    }
                    self.samples += 1;
                }
                self.trials_used += 1;
            }
            None => self.failures += 1,
        }
    }

    /// Root-mean-square errors in degrees, `NaN` with no usable trial.
    pub fn rmse_deg(&self) -> [f64; 4] {
        let mut out = [f64::NAN; 4];
        if self.samples > 0 {
            for k in 0..4 {
                out[k] = (self.sum_sq[k] / self.samples as f64).sqrt().to_degrees();
            }
        }
        out
    }
}

/// One aggregate row of a sweep; angles in degrees.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RmseRecord {
    pub algorithm: String,
    pub mx: usize,
    pub my: usize,
    pub snr_db: f64,
    pub snapshots: usize,
    pub trials_used: usize,
    pub failures: usize,
    pub rmse_theta: f64,
    pub rmse_phi: f64,
    pub rmse_gamma: f64,
    pub rmse_eta: f64,
    pub crb_theta: Option<f64>,
    pub crb_phi: Option<f64>,
    pub crb_gamma: Option<f64>,
    pub crb_eta: Option<f64>,
}
