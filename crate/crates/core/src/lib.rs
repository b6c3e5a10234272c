//! Direction-of-arrival and polarization estimation for dual-polarized
//! uniform rectangular arrays using quaternion MUSIC.
//!
//! The crate is organized bottom-up:
//!
//! * [`quaternion`] and [`qmatrix`]: quaternion scalars and matrices in
//!   complex form `c1 + c2·j2`, their complex adjoint and eigen-solver.
//! * [`linalg`]: dense Hermitian eigen-decomposition and positive-definite
//!   solves.
//! * [`signal`]: the crossed-dipole array model and snapshot synthesis.
//! * [`music`]: covariance estimates, subspaces, spectra and the three
//!   estimators.
//! * [`crb`]: the stochastic Cramér-Rao bound.

pub mod crb;
pub mod error;
pub mod linalg;
pub mod music;
pub mod qmatrix;
pub mod quaternion;
pub mod signal;

pub use error::{CrbError, LinalgError, ModelError, MusicError, QuaternionError};
pub use music::{estimate, estimate_from_covariances, Algorithm, EstimationResult, GridSpec, SourceEstimate};
pub use qmatrix::QMatrix;
pub use quaternion::Quaternion;
pub use signal::{ArrayConfig, SignalKind, SnapshotSet, SourceParams};
