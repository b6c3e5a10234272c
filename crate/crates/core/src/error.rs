use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("tridiagonal QL did not converge at index {index}")]
    NoConvergence { index: usize },
    #[error("matrix is not positive definite (pivot {pivot})")]
    NotPositiveDefinite { pivot: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuaternionError {
    #[error("inner dimensions differ: {left_cols} columns vs {right_rows} rows")]
    DimensionMismatch { left_cols: usize, right_rows: usize },
    #[error("part shapes differ: {0:?} vs {1:?}")]
    PartShape((usize, usize), (usize, usize)),
    #[error("complex matrix is not a quaternion adjoint (deviation {deviation:.3e})")]
    NotAdjoint { deviation: f64 },
    #[error("adjoint must have even dimensions, got {rows}x{cols}")]
    OddAdjoint { rows: usize, cols: usize },
    #[error("matrix is not self-conjugated (deviation {deviation:.3e})")]
    NotSelfConjugated { deviation: f64 },
    #[error("adjoint spectrum cannot be paired into quaternion eigenvectors")]
    Unpaired,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("array needs at least one element per axis, got {mx}x{my}")]
    EmptyArray { mx: usize, my: usize },
    #[error("element spacing must be positive and finite, got {0}")]
    Spacing(f64),
    #[error("source {index}: {field} = {value} outside {range}")]
    SourceParam {
        index: usize,
        field: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("{sources} sources need at least {needed} elements, array has {elements}")]
    TooManySources {
        sources: usize,
        elements: usize,
        needed: usize,
    },
    #[error("snapshot count must be positive")]
    NoSnapshots,
    #[error("snr must not be NaN or -inf")]
    Snr,
    #[error("snapshot parts have different shapes")]
    ShapeMismatch,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MusicError {
    #[error("{sources} sources leave no noise subspace in dimension {dim}")]
    NoNoiseSubspace { sources: usize, dim: usize },
    #[error("covariance dimension {found} does not match the array ({expected})")]
    Dimension { expected: usize, found: usize },
    #[error("need at least one snapshot")]
    NoSnapshots,
    #[error("peak search found {} of {wanted} minima", found.len())]
    PeakShortfall {
        wanted: usize,
        found: Vec<crate::music::Peak>,
    },
    #[error("polarization is degenerate at this direction")]
    DegeneratePolarization,
    #[error("invalid search grid: {0}")]
    Grid(&'static str),
    #[error(transparent)]
    Quaternion(#[from] QuaternionError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CrbError {
    #[error("noise variance must be positive and finite, got {0}")]
    NoiseVariance(f64),
    #[error("source covariance must be {expected}x{expected}, got {rows}x{cols}")]
    SourceCovariance {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("Fisher information is singular; poorly identified: {}", params.join(", "))]
    SingularFisher { params: Vec<String> },
    #[error("steering matrix is rank deficient")]
    RankDeficient,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Model(#[from] ModelError),
}
