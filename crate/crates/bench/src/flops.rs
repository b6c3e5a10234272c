//! Closed-form operation counts of the estimators (complex multiplications).
//!
//! `J1`, `J2` are the θ and φ grid sizes of the DOA search, `J3`, `J4` the γ
//! and η grid sizes of a polarization search.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlopAlgorithm {
    /// Four-dimensional long-vector MUSIC.
    Lv,
    Qdr,
    Qnc,
    Dr,
}

impl FlopAlgorithm {
    pub const ALL: [FlopAlgorithm; 4] = [FlopAlgorithm::Lv, FlopAlgorithm::Qdr, FlopAlgorithm::Qnc, FlopAlgorithm::Dr];
}

impl fmt::Display for FlopAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FlopAlgorithm::Lv => "LV",
            FlopAlgorithm::Qdr => "QDR",
            FlopAlgorithm::Qnc => "QNC",
            FlopAlgorithm::Dr => "DR",
        })
    }
}

impl FromStr for FlopAlgorithm {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "LV" => Ok(FlopAlgorithm::Lv),
            "QDR" => Ok(FlopAlgorithm::Qdr),
            "QNC" => Ok(FlopAlgorithm::Qnc),
            "DR" => Ok(FlopAlgorithm::Dr),
            _ => Err(format!("unknown algorithm `{s}` (expected LV, QDR, QNC or DR)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridPoints {
    pub j1: u64,
    pub j2: u64,
    pub j3: u64,
    pub j4: u64,
}

impl Default for GridPoints {
    /// 0.1° DOA grid over θ ∈ [0°, 180°), φ ∈ [0.5°, 90°) and 0.03°
    /// polarization grid over γ ∈ [0°, 90°), η ∈ [0°, 360°).
    fn default() -> Self {
        Self {
            j1: 1800,
            j2: 895,
            j3: 3000,
            j4: 12000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlopError {
    #[error("model needs L < M (got L = {sources}, M = {elements})")]
    TooManySources { sources: u64, elements: u64 },
}

/// Operation count for `m` elements, `l` sources and `n` snapshots.
pub fn flop_model(alg: FlopAlgorithm, m: u64, l: u64, n: u64, j: GridPoints) -> Result<u128, FlopError> {
    if l >= m {
        return Err(FlopError::TooManySources { sources: l, elements: m });
    }
    let (m, l, n) = (m as u128, l as u128, n as u128);
    let (j1, j2, j3, j4) = (j.j1 as u128, j.j2 as u128, j.j3 as u128, j.j4 as u128);
    let m2 = m * m;
    Ok(match alg {
        FlopAlgorithm::Lv => j1 * j2 * j3 * j4 * (2 * m + 1) * (2 * m - l) + 4 * m2 * (n + l + 2),
        FlopAlgorithm::Qdr => {
            2 * j1 * j2 * (m + 1) * (m - l) + j3 * j4 * l * (2 * m + 1) * (2 * m - l) + 8 * m2 * (n + l + 2)
        }
        FlopAlgorithm::Qnc => {
            4 * j1 * j2 * (m + 1) * (2 * m - l) + 2 * j1 * j2 * (2 * m - l) + 20 * m2 * (l + 2) + 8 * m2 * n
        }
        FlopAlgorithm::Dr => 2 * j1 * j2 * (2 * m + 1) * (2 * m - l) + j1 * j2 * (2 * m - l) + 4 * m2 * (n + l + 2),
    })
}
