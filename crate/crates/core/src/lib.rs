//! Simulation and verification toolkit for the edge of multilevel beta
//! ensembles.
//!
//! The library has three layers:
//!
//! * exact fixed-time samplers for interlacing arrays of beta-ensemble
//!   spectra ([`ensemble`]), built on a tridiagonal matrix model and a
//!   Dirichlet-weighted root construction for the one-level-down
//!   conditional law;
//! * time integrators for the interacting particle dynamics on the full
//!   array ([`mdbm`]) and for its local-interaction edge limit
//!   ([`limit`]), with a positivity-preserving split-step scheme for the
//!   singular drifts;
//! * statistical machinery and a self-contained verification suite
//!   ([`stats`], [`verify`]) checking the limit laws, exact identities
//!   and stationarity properties at desk scale.
//!
//! Everything is deterministic given a seed: batch computations derive one
//! independent [`rng::RngStream`] per work unit, so results do not depend
//! on thread count.

pub mod adjoint;
pub mod ensemble;
pub mod error;
pub mod limit;
pub mod linalg;
pub mod mdbm;
pub mod model;
pub mod rng;
pub mod special;
pub mod stats;
pub mod verify;

pub use error::Error;
pub use model::{GammaLaw, GtArray, LevelSpectrum, SimConfig, SpacingVector};
pub use rng::RngStream;
